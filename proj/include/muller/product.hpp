#pragma once

#include "muller/strategy.hpp"

namespace muller {

/// The arena with a fixed Eve strategy folded in. Only Adam still decides:
/// Eve's and Random states become Random product states combining the move
/// (or delta) with the memory update; each move of an Adam state routes
/// through a Random arrival gadget that applies the memory update.
struct ProductMdp {
  Arena mdp;
  std::vector<StateIndex> proj_state;  // product state -> arena state
  std::vector<MemIndex> proj_mem;      // memory before arrival update
  std::vector<bool> gadget;            // arrival gadgets
  std::vector<std::int64_t> initial;   // arena state -> product (s, m0), -1 unreachable

  ProductMdp() : mdp(ColourAlphabet({"?"})) {}

  StateSet initial_set() const {
    StateSet out(mdp.size());
    for (auto i : initial)
      if (i >= 0) out.set(static_cast<std::size_t>(i));
    return out;
  }
};

/// Builds the product MDP from every (state, initial-memory) pair of the
/// entry set (all states by default). Requires the strategy to be defined on
/// each reachable Eve-state/memory pair.
ProductMdp product(const Arena& arena, const StrategyTransducer& eve);
ProductMdp product(const Arena& arena, const StrategyTransducer& eve, const StateSet& entries);
ProductMdp product(const Arena& arena, const SupportStrategy& eve);

}  // namespace muller
