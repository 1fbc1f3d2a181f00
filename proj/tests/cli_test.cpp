#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "muller/io.hpp"
#include "test_support.hpp"

using namespace muller;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string command = std::string(MULLER_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buffer;
  RunResult res{-1, {}};
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe))
    res.out.append(buffer.data(), n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

fs::path tmp_dir() {
  auto dir = fs::temp_directory_path() / "muller_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string data(const char* name) {
  return (fs::path(MULLER_DATA_DIR) / name).string();
}

}  // namespace

TEST_CASE("tree command prints the three numbers") {
  auto res = run_cli("tree " + data("recurring_condition.json"));
  CHECK(res.exit_code == 0);
  CHECK(res.out == "m=4 mU=3 r=2\n");
}

TEST_CASE("tree command on the empty family") {
  auto dir = tmp_dir();
  auto path = dir / "empty.json";
  std::ofstream(path) << R"({"colours":["a"],"winning":[],"empty_wins":false})";
  auto res = run_cli("tree " + path.string());
  CHECK(res.exit_code == 0);
  CHECK(res.out == "m=1 mU=1 r=1\n");
}

TEST_CASE("malformed JSON gives exit 2") {
  auto dir = tmp_dir();
  auto path = dir / "broken.json";
  std::ofstream(path) << "{ not json";
  auto res = run_cli("tree " + path.string());
  CHECK(res.exit_code == 2);
}

TEST_CASE("bounds command") {
  auto res = run_cli("bounds " + data("recurring_condition.json"));
  CHECK(res.exit_code == 0);
  auto j = Json::parse(res.out);
  CHECK(j["m"] == 4);
  CHECK(j["mU"] == 3);
  CHECK(j["r"] == 2);
  CHECK(j["upward_closed"] == false);
  CHECK(j["memoryless_randomised"] == false);
}

TEST_CASE("solve command") {
  auto res =
      run_cli("solve " + data("recurring_game.json") + " " + data("recurring_condition.json"));
  CHECK(res.exit_code == 0);
  auto j = Json::parse(res.out);
  CHECK(j["eve_region"].size() == 10);
  CHECK(j["adam_region"].empty());
}

TEST_CASE("witness, synthesize, verify pipeline") {
  auto dir = tmp_dir();
  auto arena_path = (dir / "witness.json").string();
  auto map_path = (dir / "map.json").string();
  auto strat_path = (dir / "strategy.json").string();

  auto w = run_cli("witness " + data("recurring_condition.json") + " -o " + arena_path +
                   " --map " + map_path);
  REQUIRE(w.exit_code == 0);
  CHECK(fs::exists(arena_path));
  CHECK(fs::exists(map_path));

  auto s = run_cli("synthesize " + arena_path + " " + data("recurring_condition.json"));
  REQUIRE(s.exit_code == 0);
  auto sj = Json::parse(s.out);
  REQUIRE(!sj["strategy"].is_null());
  CHECK(sj["strategy"]["memory"].size() == 2);
  std::ofstream(strat_path) << sj["strategy"].dump(2);

  auto v = run_cli("verify " + arena_path + " " + data("recurring_condition.json") + " " +
                   strat_path);
  CHECK(v.exit_code == 0);
  CHECK(Json::parse(v.out)["verdict"] == "AlmostSure");

  SUBCASE("corrupting the strategy refutes it with a counterexample") {
    auto arena = arena_from_json(load_json(arena_path));
    auto strategy = strategy_from_json(sj["strategy"], arena);
    // force both memories to play the first pair everywhere
    for (StateIndex st = 0; st < arena.size(); ++st)
      if (arena.states[st].owner == Owner::Eve)
        for (std::size_t m = 0; m < strategy.memory_size(); ++m)
          strategy.next[st][m] = {{arena.succ[st].front(), Rational(1)}};
    auto bad_path = (dir / "bad_strategy.json").string();
    std::ofstream(bad_path) << strategy_to_json(strategy, arena).dump(2);
    auto bad = run_cli("verify " + arena_path + " " + data("recurring_condition.json") + " " +
                       bad_path);
    CHECK(bad.exit_code == 1);
    auto bj = Json::parse(bad.out);
    CHECK(bj["verdict"] == "Refuted");
    CHECK(!bj["counterexample"].is_null());
    CHECK(bj["counterexample"].contains("end_component"));
  }
}

TEST_CASE("verify --sure on the witness sure strategy") {
  auto dir = tmp_dir();
  auto condition = test::recurring_condition();
  auto tree = build_zielonka_tree(condition);
  auto dag = build_zielonka_dag(tree);
  auto cropped = optimal_cropped_dag(dag, tree);
  auto witness = build_witness(condition.alphabet(), cropped);
  auto sigma = sure_strategy(cropped, witness);
  auto arena_path = (dir / "sw_arena.json").string();
  auto strat_path = (dir / "sw_strategy.json").string();
  std::ofstream(arena_path) << arena_to_json(witness.arena).dump(2);
  std::ofstream(strat_path) << strategy_to_json(sigma, witness.arena).dump(2);
  auto res = run_cli("verify --sure " + arena_path + " " + data("recurring_condition.json") +
                     " " + strat_path);
  CHECK(res.exit_code == 0);
  CHECK(Json::parse(res.out)["verdict"] == "SureWin");
}

TEST_CASE("simulate command") {
  SUBCASE("zero episodes exits 0 with empty stats") {
    auto res = run_cli("simulate " + data("recurring_game.json") + " " +
                       data("recurring_condition.json") + " --episodes 0");
    CHECK(res.exit_code == 0);
    auto j = Json::parse(res.out);
    CHECK(j["episodes"] == 0);
  }
  SUBCASE("byte-identical output for identical seeds") {
    std::string args = "simulate " + data("recurring_game.json") + " " +
                       data("recurring_condition.json") +
                       " --episodes 40 --horizon 300 --seed 9";
    auto r1 = run_cli(args);
    auto r2 = run_cli(args);
    CHECK(r1.exit_code == 0);
    CHECK(r1.out == r2.out);
    CHECK(!r1.out.empty());
  }
}

TEST_CASE("deterministic outputs across runs") {
  for (const char* args : {"tree", "bounds"}) {
    auto r1 = run_cli(std::string(args) + " " + data("recurring_condition.json"));
    auto r2 = run_cli(std::string(args) + " " + data("recurring_condition.json"));
    CHECK(r1.out == r2.out);
  }
  auto dir = tmp_dir();
  auto p1 = (dir / "w1.json").string(), p2 = (dir / "w2.json").string();
  run_cli("witness " + data("recurring_condition.json") + " -o " + p1);
  run_cli("witness " + data("recurring_condition.json") + " -o " + p2);
  std::ifstream f1(p1), f2(p2);
  std::string s1((std::istreambuf_iterator<char>(f1)), {});
  std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
  CHECK(!s1.empty());
}

TEST_CASE("round trips") {
  SUBCASE("condition JSON") {
    auto j = load_json(data("recurring_condition.json"));
    auto condition = condition_from_json(j);
    auto j2 = condition_to_json(condition);
    CHECK(condition_from_json(j2).winning() == condition.winning());
    CHECK(j2 == condition_to_json(condition_from_json(j2)));
  }
  SUBCASE("arena JSON") {
    auto arena = test::random_arena(3, {.with_random_states = true});
    auto j = arena_to_json(arena);
    auto back = arena_from_json(j);
    CHECK(arena_to_json(back) == j);
  }
  SUBCASE("strategy JSON") {
    auto arena = test::recurring_game();
    auto condition = test::recurring_condition();
    auto strategy = synthesize(arena, condition);
    auto j = strategy_to_json(strategy, arena);
    auto back = strategy_from_json(j, arena);
    CHECK(strategy_to_json(back, arena) == j);
    CHECK(back.initial == strategy.initial);
    CHECK(back.next == strategy.next);
  }
  SUBCASE("dot exports are well-formed") {
    auto condition = test::recurring_condition();
    auto tree = build_zielonka_tree(condition);
    auto text = dot_tree(tree, condition.alphabet());
    CHECK(text.find("digraph") == 0);
    CHECK(text.find("{a,b,c,d}") != std::string::npos);
    CHECK(text.find("shape=box") != std::string::npos);
    auto arena_text = dot_arena(test::recurring_game());
    CHECK(arena_text.find("shape=ellipse") != std::string::npos);
  }
}
