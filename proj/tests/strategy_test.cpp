#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "muller/product.hpp"
#include "test_support.hpp"

using namespace muller;

namespace {

/// The hand-built 2-memory strategy for the recurring game: in "right" play
/// towards the n5/n6 half, in "left" towards a2/b3; drop back to "left" on
/// every c, leave "left" with probability one half.
StrategyTransducer recurring_hand_strategy(const Arena& arena) {
  SupportStrategy s = SupportStrategy::blank(arena, Owner::Eve, 2);
  s.initial = 1;  // right
  auto idx = [&](const char* n) { return *arena.index(n); };
  const MemIndex left = 0, right = 1;
  s.next[idx("n4")][left] = {idx("a2"), idx("b3")};
  s.next[idx("n4")][right] = {idx("n5"), idx("n6")};
  for (const char* n : {"c0", "a7", "b8", "c9"})
    for (MemIndex m : {left, right}) s.next[idx(n)][m] = {idx("n4")};
  for (StateIndex t = 0; t < arena.size(); ++t) {
    bool is_c = arena.states[t].colour && *arena.states[t].colour == 2;
    s.update[t][right] = is_c ? std::vector<MemIndex>{left} : std::vector<MemIndex>{right};
    s.update[t][left] = std::vector<MemIndex>{left, right};
  }
  auto out = uniformize(arena, s);
  out.memory = {"left", "right"};
  return out;
}

}  // namespace

TEST_CASE("uniformize") {
  auto arena = test::recurring_game();
  SUBCASE("singleton supports give a pure strategy") {
    SupportStrategy s = SupportStrategy::blank(arena, Owner::Eve, 1);
    for (StateIndex i = 0; i < arena.size(); ++i)
      if (arena.states[i].owner == Owner::Eve) s.next[i][0] = {arena.succ[i].front()};
    auto t = uniformize(arena, s);
    CHECK(t.pure());
    CHECK(t.next[*arena.index("n4")][0].front().second == Rational(1));
  }
  SUBCASE("two-element support becomes one half each") {
    auto t = recurring_hand_strategy(arena);
    auto d = t.next[*arena.index("n4")][1];
    REQUIRE(d.size() == 2);
    CHECK(d[0].second == Rational(1, 2));
    CHECK(d[1].second == Rational(1, 2));
    // the left-to-right switch has probability one half per step
    CHECK(t.update[*arena.index("n4")][0].size() == 2);
    // supports survive the round trip exactly
    auto back = SupportStrategy::of(t);
    CHECK(back.next[*arena.index("n4")][1] ==
          std::vector<StateIndex>{*arena.index("n5"), *arena.index("n6")});
  }
  SUBCASE("illegal support is rejected") {
    SupportStrategy s = SupportStrategy::blank(arena, Owner::Eve, 1);
    s.next[*arena.index("n4")][0] = {*arena.index("c0")};  // no such edge
    CHECK_THROWS_AS(uniformize(arena, s), IllegalMove);
  }
}

TEST_CASE("pure_memoryless") {
  auto arena = test::recurring_game();
  SUBCASE("wraps a move table") {
    std::vector<std::int32_t> moves(arena.size(), -1);
    for (StateIndex s = 0; s < arena.size(); ++s)
      if (arena.states[s].owner == Owner::Eve)
        moves[s] = static_cast<std::int32_t>(arena.succ[s].front());
    auto t = pure_memoryless(arena, Owner::Eve, moves);
    CHECK(t.memory_size() == 1);
    CHECK(t.pure());
  }
  SUBCASE("rejects non-edges") {
    std::vector<std::int32_t> moves(arena.size(), -1);
    moves[*arena.index("n4")] = static_cast<std::int32_t>(*arena.index("c0"));
    CHECK_THROWS_AS(pure_memoryless(arena, Owner::Eve, moves), IllegalMove);
  }
}

TEST_CASE("product structure") {
  auto arena = test::recurring_game();
  SUBCASE("memoryless pure strategy: Eve product states have one successor") {
    std::vector<std::int32_t> moves(arena.size(), -1);
    for (StateIndex s = 0; s < arena.size(); ++s)
      if (arena.states[s].owner == Owner::Eve)
        moves[s] = static_cast<std::int32_t>(arena.succ[s].front());
    auto prod = product(arena, pure_memoryless(arena, Owner::Eve, moves));
    for (StateIndex s = 0; s < prod.mdp.size(); ++s) {
      if (prod.gadget[s]) continue;
      StateIndex base = prod.proj_state[s];
      if (arena.states[base].owner == Owner::Eve) CHECK(prod.mdp.succ[s].size() == 1);
    }
    CHECK(validate(prod.mdp).empty());
  }
  SUBCASE("size bound: |states| x |memory| main states plus arrival gadgets") {
    auto strategy = recurring_hand_strategy(arena);
    auto prod = product(arena, strategy);
    std::size_t mains = 0;
    for (StateIndex s = 0; s < prod.mdp.size(); ++s)
      if (!prod.gadget[s]) ++mains;
    CHECK(mains <= arena.size() * strategy.memory_size());
    CHECK(validate(prod.mdp).empty());
  }
  SUBCASE("undefined reachable entry raises StrategyIncomplete") {
    SupportStrategy s = SupportStrategy::blank(arena, Owner::Eve, 1);
    s.next[*arena.index("n4")][0] = {*arena.index("n5")};
    // c0, a7, b8, c9 left undefined but reachable
    CHECK_THROWS_AS(product(arena, uniformize(arena, s)), StrategyIncomplete);
  }
}

TEST_CASE("product projection is a consistent play") {
  // random walks through the product project to legal arena plays in which
  // every Eve move lies in the strategy's support
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto arena = test::random_arena(seed, {.with_random_states = true});
    SupportStrategy s = SupportStrategy::blank(arena, Owner::Eve, 2);
    std::mt19937_64 rng(seed);
    for (StateIndex i = 0; i < arena.size(); ++i) {
      for (MemIndex m = 0; m < 2; ++m) {
        if (arena.states[i].owner == Owner::Eve) {
          // nonempty random subset of successors
          std::vector<StateIndex> support;
          for (StateIndex t : arena.succ[i])
            if (rng() % 2) support.push_back(t);
          if (support.empty()) support.push_back(arena.succ[i][rng() % arena.succ[i].size()]);
          s.next[i][m] = support;
        }
        s.update[i][m] = {static_cast<MemIndex>(rng() % 2)};
      }
    }
    auto strategy = uniformize(arena, s);
    auto prod = product(arena, strategy);
    StateIndex cur = static_cast<StateIndex>(prod.initial[0]);
    StateIndex prev_base = prod.proj_state[cur];
    for (int step = 0; step < 200; ++step) {
      const auto& succ = prod.mdp.succ[cur];
      REQUIRE(!succ.empty());
      StateIndex next = succ[rng() % succ.size()];
      StateIndex base = prod.proj_state[next];
      if (!prod.gadget[next] && !prod.gadget[cur]) {
        CHECK(arena.has_edge(prev_base, base));
        if (arena.states[prev_base].owner == Owner::Eve) {
          MemIndex m = prod.proj_mem[cur];
          const auto& dist = strategy.next[prev_base][m];
          bool in_support = false;
          for (const auto& [t, p] : dist) in_support |= (t == base);
          CHECK(in_support);
        }
        prev_base = base;
      } else if (!prod.gadget[next] && prod.gadget[cur]) {
        CHECK(base == prod.proj_state[cur]);  // gadget resolves to its state
        prev_base = base;
      }
      cur = next;
    }
  }
}

TEST_CASE("support preservation: equal edges under uniformize and product") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto arena = test::random_arena(seed);
    SupportStrategy s = SupportStrategy::blank(arena, Owner::Eve, 2);
    std::mt19937_64 rng(seed ^ 42);
    for (StateIndex i = 0; i < arena.size(); ++i)
      for (MemIndex m = 0; m < 2; ++m) {
        if (arena.states[i].owner == Owner::Eve) {
          std::vector<StateIndex> support{arena.succ[i][rng() % arena.succ[i].size()]};
          for (StateIndex t : arena.succ[i])
            if (rng() % 2 && t != support[0]) support.push_back(t);
          std::sort(support.begin(), support.end());
          s.next[i][m] = support;
        }
        s.update[i][m] = {0, 1};
      }
    auto u = uniformize(arena, s);
    CHECK(SupportStrategy::of(u).next == s.next);
    // a skewed but support-equal variant yields the same product edges
    auto skew = u;
    for (auto& per_state : skew.next)
      for (auto& dist : per_state)
        if (dist.size() >= 2) {
          dist[0].second = Rational(3, 4);
          dist[1].second = Rational(1, 4) / Rational(static_cast<int64_t>(dist.size()) - 1);
          for (std::size_t i = 2; i < dist.size(); ++i) dist[i].second = dist[1].second;
        }
    auto p1 = product(arena, u);
    auto p2 = product(arena, skew);
    REQUIRE(p1.mdp.size() == p2.mdp.size());
    CHECK(p1.mdp.succ == p2.mdp.succ);
  }
}
