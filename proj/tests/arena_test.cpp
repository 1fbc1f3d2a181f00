#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

using namespace muller;

namespace {

Arena two_state_arena() {
  ArenaBuilder b(ColourAlphabet({"a"}));
  b.state("e", Owner::Eve, "a").state("r", Owner::Random);
  b.edge("e", "r").edge("r", "e");
  return b.uniform_delta().build();
}

}  // namespace

TEST_CASE("validate") {
  SUBCASE("well-formed 2-state arena") { CHECK(validate(two_state_arena()).empty()); }
  SUBCASE("random state with delta support mismatching the edges") {
    ArenaBuilder b(ColourAlphabet({"a"}));
    b.state("r", Owner::Random).state("s", Owner::Eve).state("t", Owner::Eve);
    b.edge("r", "s").edge("r", "t").edge("s", "r").edge("t", "r");
    b.prob("r", "s", Rational(1));  // t gets probability zero
    auto arena = b.build(false);
    auto violations = validate(arena);
    REQUIRE(!violations.empty());
    CHECK(violations.front().state == "r");
  }
  SUBCASE("sink state") {
    ArenaBuilder b(ColourAlphabet({"a"}));
    b.state("s", Owner::Eve).state("sink", Owner::Adam);
    b.edge("s", "sink");
    auto violations = validate(b.build(false));
    REQUIRE(violations.size() == 1);
    CHECK(violations.front().state == "sink");
  }
  SUBCASE("distribution not summing to one") {
    ArenaBuilder b(ColourAlphabet({"a"}));
    b.state("r", Owner::Random).state("s", Owner::Eve);
    b.edge("r", "s").edge("s", "r");
    b.prob("r", "s", Rational(1, 2));
    auto violations = validate(b.build(false));
    REQUIRE(!violations.empty());
    CHECK(violations.front().message.find("sums to 1/2") != std::string::npos);
  }
}

TEST_CASE("subarena") {
  auto arena = two_state_arena();
  SUBCASE("the full state set is a subarena") {
    auto sub = subarena(arena, arena.all_states());
    CHECK(sub.states.count() == 2);
  }
  SUBCASE("random state with an escaping edge is NotClosed") {
    StateSet u(arena.size());
    u.set(*arena.index("r"));
    CHECK_THROWS_AS(subarena(arena, u), SubarenaError);
    try {
      subarena(arena, u);
    } catch (const SubarenaError& e) {
      CHECK(e.kind == SubarenaError::Kind::NotClosed);
      CHECK(e.state == "r");
    }
  }
  SUBCASE("starved non-random state is NotLive") {
    StateSet u(arena.size());
    u.set(*arena.index("e"));
    try {
      subarena(arena, u);
      FAIL("expected NotLive");
    } catch (const SubarenaError& e) {
      CHECK(e.kind == SubarenaError::Kind::NotLive);
      CHECK(e.state == "e");
    }
  }
  SUBCASE("a trap for Adam is a subarena") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      auto a = test::random_arena(seed, {.with_random_states = true});
      // complement of an Adam attractor is a trap for Adam
      StateSet target(a.size());
      target.set(seed % a.size());
      StateSet rest = a.all_states() - attractor(a, Owner::Adam, target).region;
      if (rest.none()) continue;
      REQUIRE(is_trap(a, Owner::Adam, rest));
      CHECK_NOTHROW(subarena(a, rest));
    }
  }
}

TEST_CASE("attractor basics") {
  SUBCASE("empty target gives empty region") {
    auto arena = two_state_arena();
    CHECK(attractor(arena, Owner::Eve, arena.empty_set()).region.none());
  }
  SUBCASE("forced chain") {
    ArenaBuilder b(ColourAlphabet({"a"}));
    b.state("e1", Owner::Eve).state("e2", Owner::Eve).state("t", Owner::Eve, "a");
    b.edge("e1", "e2").edge("e2", "t").edge("t", "t");
    auto arena = b.build();
    StateSet target(arena.size());
    target.set(*arena.index("t"));
    auto res = attractor(arena, Owner::Eve, target);
    CHECK(res.region.count() == 3);
    CHECK(res.strategy[*arena.index("e1")] == static_cast<std::int32_t>(*arena.index("e2")));
    CHECK(res.strategy[*arena.index("e2")] == static_cast<std::int32_t>(*arena.index("t")));
    CHECK(res.rank[*arena.index("t")] == 0);
    CHECK(res.rank[*arena.index("e2")] == 1);
    CHECK(res.rank[*arena.index("e1")] == 2);
  }
  SUBCASE("Adam state with an escaping successor stays out") {
    ArenaBuilder b(ColourAlphabet({"a"}));
    b.state("x", Owner::Adam).state("t", Owner::Eve, "a").state("u", Owner::Adam);
    b.state("e", Owner::Eve);
    b.edge("x", "t").edge("x", "u").edge("u", "u").edge("t", "t").edge("e", "x");
    auto arena = b.build();
    StateSet target(arena.size());
    target.set(*arena.index("t"));
    auto res = attractor(arena, Owner::Eve, target);
    CHECK(res.region.count() == 1);  // only t itself
    CHECK_FALSE(res.region.test(*arena.index("x")));
    CHECK_FALSE(res.region.test(*arena.index("e")));
  }
  SUBCASE("random states join on a single inside successor") {
    auto arena = two_state_arena();
    StateSet target(arena.size());
    target.set(*arena.index("e"));
    auto res = attractor(arena, Owner::Adam, target);
    CHECK(res.region.count() == 2);  // r has positive probability to reach e
  }
}

TEST_CASE("attractor properties on random arenas") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto arena =
        test::random_arena(seed, {.max_states = 10, .with_random_states = (seed % 2 == 1)});
    std::mt19937_64 rng(seed + 1000);
    StateSet u(arena.size()), v(arena.size());
    for (std::size_t s = 0; s < arena.size(); ++s) {
      if (rng() % 3 == 0) u.set(s);
      if (rng() % 3 == 0 || u.test(s)) v.set(s);
    }
    for (Owner player : {Owner::Eve, Owner::Adam}) {
      auto au = attractor(arena, player, u).region;
      auto av = attractor(arena, player, v).region;
      CHECK(au.is_subset_of(av));                          // monotone
      CHECK(attractor(arena, player, au).region == au);    // idempotent
      StateSet rest = arena.all_states() - au;
      if (rest.any()) CHECK(is_trap(arena, player, rest));  // complement is a trap
    }
    // rank decrease along the strategy
    auto res = attractor(arena, Owner::Eve, u);
    for (std::size_t s = 0; s < arena.size(); ++s) {
      if (res.strategy[s] < 0) continue;
      CHECK(res.rank[s] > res.rank[static_cast<std::size_t>(res.strategy[s])]);
      CHECK(arena.has_edge(static_cast<StateIndex>(s),
                           static_cast<StateIndex>(res.strategy[s])));
    }
  }
}

TEST_CASE("is_trap") {
  auto arena = two_state_arena();
  SUBCASE("whole arena is a trap for everyone") {
    CHECK(is_trap(arena, Owner::Eve, arena.all_states()));
    CHECK(is_trap(arena, Owner::Adam, arena.all_states()));
  }
  SUBCASE("missing a delta successor of a random member breaks trapness") {
    ArenaBuilder b(ColourAlphabet({"a"}));
    b.state("r", Owner::Random).state("s", Owner::Eve).state("t", Owner::Eve);
    b.edge("r", "s").edge("r", "t").edge("s", "r").edge("t", "r");
    auto a = b.uniform_delta().build();
    StateSet u(a.size());
    u.set(*a.index("r"));
    u.set(*a.index("s"));  // t missing
    CHECK_FALSE(is_trap(a, Owner::Eve, u));
  }
}
