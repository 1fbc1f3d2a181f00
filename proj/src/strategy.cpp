#include "muller/strategy.hpp"

#include <algorithm>

namespace muller {

bool StrategyTransducer::pure() const {
  for (const auto& per_state : next)
    for (const auto& d : per_state)
      if (d.size() > 1) return false;
  for (const auto& per_state : update)
    for (const auto& d : per_state)
      if (d.size() > 1) return false;
  return true;
}

StrategyTransducer StrategyTransducer::blank(const Arena& arena, Owner owner,
                                             std::size_t memories) {
  StrategyTransducer out;
  out.owner = owner;
  for (std::size_t m = 0; m < memories; ++m) out.memory.push_back("m" + std::to_string(m));
  out.next.assign(arena.size(), std::vector<Dist>(memories));
  out.update.assign(arena.size(), std::vector<MemDist>(memories));
  return out;
}

SupportStrategy SupportStrategy::blank(const Arena& arena, Owner owner, std::size_t memories) {
  SupportStrategy out;
  out.owner = owner;
  out.memories = memories;
  out.next.assign(arena.size(), std::vector<std::vector<StateIndex>>(memories));
  out.update.assign(arena.size(), std::vector<std::vector<MemIndex>>(memories));
  return out;
}

SupportStrategy SupportStrategy::of(const StrategyTransducer& strategy) {
  SupportStrategy out;
  out.owner = strategy.owner;
  out.memories = strategy.memory_size();
  out.initial = strategy.initial;
  out.next.assign(strategy.next.size(), {});
  out.update.assign(strategy.update.size(), {});
  for (std::size_t s = 0; s < strategy.next.size(); ++s) {
    out.next[s].resize(out.memories);
    out.update[s].resize(out.memories);
    for (std::size_t m = 0; m < out.memories; ++m) {
      for (const auto& [t, p] : strategy.next[s][m]) out.next[s][m].push_back(t);
      for (const auto& [t, p] : strategy.update[s][m]) out.update[s][m].push_back(t);
    }
  }
  return out;
}

StrategyTransducer uniformize(const Arena& arena, const SupportStrategy& support) {
  StrategyTransducer out = StrategyTransducer::blank(arena, support.owner, support.memories);
  out.initial = support.initial;
  for (std::size_t s = 0; s < arena.size(); ++s) {
    for (std::size_t m = 0; m < support.memories; ++m) {
      const auto& moves = support.next[s][m];
      if (!moves.empty()) {
        Rational p(1, static_cast<std::int64_t>(moves.size()));
        for (StateIndex t : moves) {
          if (!arena.has_edge(static_cast<StateIndex>(s), t))
            throw IllegalMove(arena.states[s].name, arena.states[t].name);
          out.next[s][m].push_back({t, p});
        }
        std::sort(out.next[s][m].begin(), out.next[s][m].end());
      }
      const auto& upd = support.update[s][m];
      if (!upd.empty()) {
        Rational p(1, static_cast<std::int64_t>(upd.size()));
        for (MemIndex t : upd) out.update[s][m].push_back({t, p});
        std::sort(out.update[s][m].begin(), out.update[s][m].end());
      }
    }
  }
  return out;
}

StrategyTransducer pure_memoryless(const Arena& arena, Owner owner,
                                   const std::vector<std::int32_t>& moves) {
  StrategyTransducer out = StrategyTransducer::blank(arena, owner, 1);
  for (StateIndex s = 0; s < arena.size(); ++s) {
    if (moves[s] < 0) continue;
    StateIndex t = static_cast<StateIndex>(moves[s]);
    if (!arena.has_edge(s, t)) throw IllegalMove(arena.states[s].name, arena.states[t].name);
    out.next[s][0] = {{t, Rational(1)}};
  }
  return out;
}

Arena restrict_to_positional(const Arena& arena, const StrategyTransducer& strategy) {
  if (strategy.memory_size() != 1 || !strategy.pure())
    throw Unsupported("restrict_to_positional needs a pure memoryless strategy");
  Arena out(arena.alphabet);
  out.states = arena.states;
  out.succ.assign(arena.size(), {});
  out.pred.assign(arena.size(), {});
  out.delta = arena.delta;
  for (StateIndex s = 0; s < arena.size(); ++s) {
    const auto& d = strategy.next[s][0];
    if (arena.states[s].owner == strategy.owner && !d.empty())
      out.succ[s] = {d.front().first};
    else
      out.succ[s] = arena.succ[s];
    for (StateIndex t : out.succ[s]) out.pred[t].push_back(s);
  }
  for (auto& list : out.pred) std::sort(list.begin(), list.end());
  return out;
}

}  // namespace muller
