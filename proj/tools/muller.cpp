#include <CLI11.hpp>
#include <iostream>

#include "muller/io.hpp"

using namespace muller;

namespace {

// exit codes: 0 solved/verified, 1 refuted, 2 error
constexpr int kOk = 0;
constexpr int kRefuted = 1;
constexpr int kError = 2;

void emit(const Json& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    save_text(out_path, text);
}

StateSet parse_from(const Arena& arena, const std::string& from) {
  if (from.empty()) return arena.all_states();
  StateSet set(arena.size());
  std::size_t pos = 0;
  while (pos <= from.size()) {
    auto comma = from.find(',', pos);
    std::string name = from.substr(pos, comma == std::string::npos ? comma : comma - pos);
    auto s = arena.index(name);
    if (!s) throw ParseError("unknown state '" + name + "' in --from");
    set.set(*s);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return set;
}

int run(int argc, char** argv) {
  CLI::App app{"Zielonka-tree analysis, strategy synthesis and verification "
               "for stochastic Muller games"};
  app.require_subcommand(1);

  std::string condition_path, arena_path, strategy_path, adam_path;
  std::string out_path, dot_path, map_path;
  bool as_dag = false, sure = false;
  int choice = -1;
  std::uint64_t episodes = 1000, horizon = 10000, seed = 0;
  std::string from_states, start_state;

  auto* tree = app.add_subcommand("tree", "print the memory numbers, render the tree");
  tree->add_option("condition", condition_path)->required();
  tree->add_option("--dot", dot_path, "write a DOT rendering");
  tree->add_flag("--dag", as_dag, "render the DAG instead of the tree");
  tree->add_option("--json", out_path, "write a JSON rendering");

  auto* bounds = app.add_subcommand("bounds", "memory numbers and shape predicates as JSON");
  bounds->add_option("condition", condition_path)->required();

  auto* solve_cmd = app.add_subcommand("solve", "almost-sure winning regions");
  solve_cmd->add_option("arena", arena_path)->required();
  solve_cmd->add_option("condition", condition_path)->required();
  solve_cmd->add_option("-o,--out", out_path);

  auto* synth = app.add_subcommand("synthesize", "almost-sure strategy on the Eve region");
  synth->add_option("arena", arena_path)->required();
  synth->add_option("condition", condition_path)->required();
  synth->add_option("-o,--out", out_path);

  auto* witness_cmd = app.add_subcommand("witness", "lower-bound arena of a condition");
  witness_cmd->add_option("condition", condition_path)->required();
  witness_cmd->add_option("-o,--out", out_path);
  witness_cmd->add_option("--map", map_path, "write the state-role sidecar");
  witness_cmd->add_option("--choice", choice,
                          "use the k-th cropped DAG instead of the optimal one");

  auto* verify = app.add_subcommand("verify", "check a strategy file");
  verify->add_option("arena", arena_path)->required();
  verify->add_option("condition", condition_path)->required();
  verify->add_option("strategy", strategy_path)->required();
  verify->add_flag("--sure", sure, "check sure winning instead of almost-sure");
  verify->add_option("--from", from_states, "comma-separated start states (default: all)");
  verify->add_option("-o,--out", out_path);

  auto* sim = app.add_subcommand("simulate", "seeded episode statistics");
  sim->add_option("arena", arena_path)->required();
  sim->add_option("condition", condition_path)->required();
  sim->add_option("--eve", strategy_path, "Eve strategy file (default: uniform)");
  sim->add_option("--adam", adam_path, "Adam strategy file (default: uniform)");
  sim->add_option("--episodes", episodes);
  sim->add_option("--horizon", horizon);
  sim->add_option("--seed", seed);
  sim->add_option("--start", start_state, "initial state (default: first)");
  sim->add_option("-o,--out", out_path);

  CLI11_PARSE(app, argc, argv);

  if (tree->parsed() || bounds->parsed()) {
    auto condition = condition_from_json(load_json(condition_path));
    auto zt = build_zielonka_tree(condition);
    int m = memory_number_m(zt);
    int mu = memory_number_mU(zt, condition);
    int r = memory_number_r(zt);
    if (tree->parsed()) {
      std::cout << "m=" << m << " mU=" << mu << " r=" << r << "\n";
      if (!dot_path.empty()) {
        if (as_dag)
          save_text(dot_path, dot_dag(build_zielonka_dag(zt), condition.alphabet()));
        else
          save_text(dot_path, dot_tree(zt, condition.alphabet()));
      }
      if (!out_path.empty()) {
        Json j = as_dag ? dag_to_json(build_zielonka_dag(zt), condition.alphabet())
                        : tree_to_json(zt, condition.alphabet());
        save_text(out_path, j.dump(2) + "\n");
      }
    } else {
      Json j;
      j["m"] = m;
      j["mU"] = mu;
      j["r"] = r;
      j["upward_closed"] = is_upward_closed(condition);
      j["memoryless_randomised"] = admits_memoryless_randomised(zt);
      emit(j, "");
    }
    return kOk;
  }

  if (solve_cmd->parsed()) {
    auto condition = condition_from_json(load_json(condition_path));
    auto arena = arena_from_json(load_json(arena_path));
    auto result = solve(arena, condition);
    emit(solve_result_to_json(result, arena), out_path);
    return kOk;
  }

  if (synth->parsed()) {
    auto condition = condition_from_json(load_json(condition_path));
    auto arena = arena_from_json(load_json(arena_path));
    auto result = solve_and_synthesize(arena, condition);
    Json j;
    Json names = Json::array();
    for (std::size_t s = result.solved.eve_region.find_first(); s != StateSet::npos;
         s = result.solved.eve_region.find_next(s))
      names.push_back(arena.states[s].name);
    j["eve_region"] = names;
    j["strategy"] =
        result.strategy ? strategy_to_json(*result.strategy, arena) : Json(nullptr);
    emit(j, out_path);
    return kOk;
  }

  if (witness_cmd->parsed()) {
    auto condition = condition_from_json(load_json(condition_path));
    auto zt = build_zielonka_tree(condition);
    auto dag = build_zielonka_dag(zt);
    CroppedDag cropped;
    if (choice >= 0) {
      auto all = enumerate_cropped_dags(dag);
      if (static_cast<std::size_t>(choice) >= all.size())
        throw Error("cropped DAG index out of range (have " + std::to_string(all.size()) + ")");
      cropped = all[static_cast<std::size_t>(choice)];
    } else {
      cropped = optimal_cropped_dag(dag, zt);
    }
    auto witness = build_witness(condition.alphabet(), cropped);
    emit(arena_to_json(witness.arena), out_path);
    if (!map_path.empty())
      save_text(map_path, witness_map_to_json(witness, condition.alphabet()).dump(2) + "\n");
    return kOk;
  }

  if (verify->parsed()) {
    auto condition = condition_from_json(load_json(condition_path));
    auto arena = arena_from_json(load_json(arena_path));
    auto strategy = strategy_from_json(load_json(strategy_path), arena);
    VerificationReport report =
        sure ? check_sure_win(arena, condition, strategy)
             : check_almost_sure(arena, condition, strategy, parse_from(arena, from_states));
    emit(report_to_json(report, arena), out_path);
    return report.verdict == VerificationReport::Verdict::Refuted ? kRefuted : kOk;
  }

  if (sim->parsed()) {
    auto condition = condition_from_json(load_json(condition_path));
    auto arena = arena_from_json(load_json(arena_path));
    std::optional<StrategyTransducer> eve, adam;
    if (!strategy_path.empty()) eve = strategy_from_json(load_json(strategy_path), arena);
    if (!adam_path.empty()) adam = strategy_from_json(load_json(adam_path), arena);
    StateIndex start = 0;
    if (!start_state.empty()) {
      auto s = arena.index(start_state);
      if (!s) throw ParseError("unknown state '" + start_state + "'");
      start = *s;
    }
    auto stats = simulate(arena, condition, eve ? &*eve : nullptr, adam ? &*adam : nullptr,
                          episodes, horizon, seed, start);
    emit(stats_to_json(stats, condition.alphabet()), out_path);
    return kOk;
  }

  return kError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
