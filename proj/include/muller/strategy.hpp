#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "muller/arena.hpp"

namespace muller {

using MemIndex = std::uint32_t;

/// One randomised finite-memory strategy: a transducer with a next-move
/// distribution on the owner's states and a memory-update distribution on
/// every state. The memory update fires on arrival: after a move to t with
/// memory m, the new memory is drawn from update(t, m).
struct StrategyTransducer {
  using Dist = std::vector<std::pair<StateIndex, Rational>>;
  using MemDist = std::vector<std::pair<MemIndex, Rational>>;

  Owner owner = Owner::Eve;
  std::vector<std::string> memory;  // names; size >= 1
  MemIndex initial = 0;
  // [state][mem]; an empty next-move distribution means "undefined here".
  // An empty update distribution means "keep the current memory".
  std::vector<std::vector<Dist>> next;
  std::vector<std::vector<MemDist>> update;

  std::size_t memory_size() const { return memory.size(); }
  bool defined(StateIndex s, MemIndex m) const { return !next[s][m].empty(); }
  MemDist update_dist(StateIndex s, MemIndex m) const {
    return update[s][m].empty() ? MemDist{{m, Rational(1)}} : update[s][m];
  }
  bool pure() const;

  static StrategyTransducer blank(const Arena& arena, Owner owner, std::size_t memories);
};

/// Qualitative abstraction: only the supports of the two distributions.
struct SupportStrategy {
  Owner owner = Owner::Eve;
  std::size_t memories = 1;
  MemIndex initial = 0;
  std::vector<std::vector<std::vector<StateIndex>>> next;  // [state][mem] -> support
  std::vector<std::vector<std::vector<MemIndex>>> update;  // empty = keep memory

  static SupportStrategy blank(const Arena& arena, Owner owner, std::size_t memories);
  static SupportStrategy of(const StrategyTransducer& strategy);
};

/// Each support becomes the uniform distribution over it.
StrategyTransducer uniformize(const Arena& arena, const SupportStrategy& support);

/// Wraps a positional move table as a singleton-memory pure transducer.
/// Throws IllegalMove if some move is not an edge. moves[s] < 0 leaves the
/// strategy undefined on s.
StrategyTransducer pure_memoryless(const Arena& arena, Owner owner,
                                   const std::vector<std::int32_t>& moves);

/// Fixes a pure memoryless strategy for its owner inside the arena: the
/// owner's states keep only the chosen edge. Undefined states are left
/// untouched. Used to compose an opponent into an arena for analysis.
Arena restrict_to_positional(const Arena& arena, const StrategyTransducer& strategy);

}  // namespace muller
