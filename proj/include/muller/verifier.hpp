#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "muller/product.hpp"

namespace muller {

/// A closed, internally strongly connected set of product states in which
/// play can stay forever with probability one. For each Adam member,
/// witness_actions lists the successors kept inside.
struct EndComponent {
  StateSet states;
  std::map<StateIndex, std::vector<StateIndex>> witness_actions;
};

struct SimulationStats {
  std::uint64_t episodes = 0;
  std::uint64_t wins = 0;
  std::uint64_t horizon = 0;
  std::uint64_t window_warnings = 0;  // estimation window not edge-closed
  std::map<std::uint64_t, std::uint64_t> inf_colour_sets;  // colour mask -> episodes
  double win_rate() const { return episodes ? double(wins) / double(episodes) : 0.0; }
};

struct Counterexample {
  // Refutation of almost-sure winning: the product MDP, a positional Adam
  // strategy reaching the bad end component and staying inside, and the
  // component itself. For sure-win refutations, a lasso instead.
  ProductMdp product;
  StateIndex start = 0;
  std::vector<std::int32_t> adam_moves;  // per product state, -1 where free
  std::optional<EndComponent> end_component;
  ColourSet inf_colours;
  std::vector<StateIndex> lasso_prefix;
  std::vector<StateIndex> lasso_cycle;
};

struct VerificationReport {
  enum class Verdict { AlmostSure, SureWin, Refuted };
  Verdict verdict;
  std::optional<Counterexample> counterexample;
  std::optional<SimulationStats> statistics;
};

/// Maximal end components of the product restricted to `candidates`.
std::vector<EndComponent> maximal_end_components(const Arena& mdp, const StateSet& candidates);

/// Exact sure-winning check on 2-player arenas: every consistent play must
/// win. Refutations carry a lasso realizing a losing Inf set.
VerificationReport check_sure_win(const Arena& arena, const MullerCondition& condition,
                                  const StrategyTransducer& eve);

/// Exact almost-sure check by end-component analysis of the product MDP,
/// from every (state, initial-memory) pair. Qualitative: only supports
/// matter.
VerificationReport check_almost_sure(const Arena& arena, const MullerCondition& condition,
                                     const StrategyTransducer& eve);
VerificationReport check_almost_sure(const Arena& arena, const MullerCondition& condition,
                                     const SupportStrategy& eve);
/// Restricts the check to product states reachable from `from`.
VerificationReport check_almost_sure(const Arena& arena, const MullerCondition& condition,
                                     const StrategyTransducer& eve, const StateSet& from);

/// Number of support strategies with |M| = memory_size before canonical
/// deduplication; saturates at uint64 max.
std::uint64_t count_support_strategies(const Arena& arena, Owner owner, std::size_t memory_size);

/// Yields all support strategies with exactly memory_size memory states, up
/// to renaming of memory states, in a deterministic order. Throws
/// ResourceLimit if the raw count exceeds max_candidates.
void enumerate_support_strategies(const Arena& arena, Owner owner, std::size_t memory_size,
                                  std::uint64_t max_candidates,
                                  const std::function<bool(const SupportStrategy&)>& yield);

/// Default enumeration bound; reads MULLER_MAX_ENUM, falling back to 1e7.
std::uint64_t max_enum_from_env();

/// Independent solver: latest-appearance-record product reduced to a parity
/// game, solved by the classical recursive algorithm. Eve's sure region of a
/// 2-player Muller game. Used as a cross-check oracle.
StateSet lar_parity_oracle(const Arena& arena, const MullerCondition& condition);

/// Seeded episode simulation. Null strategies play uniformly at random. The
/// Inf estimate is the set of states visited in the final half of the
/// horizon; a diagnostic counter reports windows that are not edge-closed.
SimulationStats simulate(const Arena& arena, const MullerCondition& condition,
                         const StrategyTransducer* eve, const StrategyTransducer* adam,
                         std::uint64_t episodes, std::uint64_t horizon, std::uint64_t seed,
                         StateIndex from = 0);

}  // namespace muller
