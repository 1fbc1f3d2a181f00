#pragma once

#include <memory>

#include "muller/strategy.hpp"
#include "muller/zielonka.hpp"

namespace muller {

/// Recursion trace of the region computation, one node per Zielonka-tree
/// level entered. At Adam-owned levels the extracted traps and their
/// attractor layers; at Eve-owned levels the removed opponent attractors.
struct SolveTrace {
  ColourSet label;
  Owner owner;
  struct Step {
    ColourSet child_label;
    StateSet universe;  // residual arena the step was taken in
    StateSet core;      // extracted trap (Adam levels) / opponent region (Eve levels)
    StateSet layer;     // removed attractor
    bool extraction;    // true at Adam levels
  };
  std::vector<Step> steps;
  std::vector<std::unique_ptr<SolveTrace>> children;
};

struct SolveResult {
  StateSet eve_region;
  StateSet adam_region;
  std::unique_ptr<SolveTrace> trace;
};

/// Almost-sure winning region of Eve, by the Zielonka-tree recursion with
/// positive-probability attractors. On 2-player arenas this is the sure
/// region.
SolveResult solve(const Arena& arena, const MullerCondition& condition);

/// Almost-sure strategy with at most memory_number_r(tree) memory states.
/// Requires Eve to win from every state; throws NotWinningEverywhere
/// otherwise.
StrategyTransducer synthesize(const Arena& arena, const MullerCondition& condition);

/// Region-restricted wrapper: solves, then synthesizes on the Eve region
/// (a trap for Adam, hence a subarena). The strategy is undefined outside
/// the region. No strategy when the region is empty.
struct SynthesisResult {
  SolveResult solved;
  std::optional<StrategyTransducer> strategy;
};
SynthesisResult solve_and_synthesize(const Arena& arena, const MullerCondition& condition);

}  // namespace muller
