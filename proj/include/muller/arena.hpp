#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "muller/colour.hpp"

namespace muller {

using StateIndex = std::uint32_t;
using StateSet = boost::dynamic_bitset<>;

/// A finite 2.5-player arena: states partitioned between Eve, Adam and
/// Random, a probabilistic transition function on Random states whose
/// support equals the edge relation, and a partial colouring.
struct Arena {
  struct State {
    std::string name;
    Owner owner;
    std::optional<std::size_t> colour;  // index into alphabet
  };

  ColourAlphabet alphabet;
  std::vector<State> states;
  std::vector<std::vector<StateIndex>> succ;  // sorted, canonical order
  std::vector<std::vector<StateIndex>> pred;
  std::vector<std::vector<Rational>> delta;  // aligned with succ on Random states

  explicit Arena(ColourAlphabet a) : alphabet(std::move(a)) {}

  std::size_t size() const { return states.size(); }
  std::optional<StateIndex> index(const std::string& name) const;
  bool has_edge(StateIndex s, StateIndex t) const;
  bool two_player() const;
  StateSet all_states() const { return StateSet(size()).set(); }
  StateSet empty_set() const { return StateSet(size()); }

  /// Colours of the coloured states in the set.
  ColourSet colours_of(const StateSet& set) const;
  /// States coloured with a colour in the set (uncoloured states excluded).
  StateSet states_coloured_in(ColourSet colours) const;
};

/// Incremental construction helper; validates on build().
class ArenaBuilder {
 public:
  explicit ArenaBuilder(ColourAlphabet alphabet) : arena_(std::move(alphabet)) {}

  ArenaBuilder& state(const std::string& name, Owner owner,
                      const std::optional<std::string>& colour = std::nullopt);
  ArenaBuilder& edge(const std::string& from, const std::string& to);
  ArenaBuilder& prob(const std::string& from, const std::string& to, const Rational& p);
  /// Uniform distribution on every Random state missing explicit probabilities.
  ArenaBuilder& uniform_delta();
  Arena build(bool validate = true);

 private:
  Arena arena_;
  std::vector<std::pair<StateIndex, std::pair<StateIndex, Rational>>> probs_;
};

struct Violation {
  std::string state;
  std::string message;
};

/// Checks all arena invariants; never throws.
std::vector<Violation> validate(const Arena& arena);

/// A live and delta-closed subset of an arena's states, with edges, delta
/// and colouring implicitly restricted.
struct SubArena {
  const Arena* parent;
  StateSet states;
};

/// Throws SubarenaError (NotClosed / NotLive) if U is not a subarena.
SubArena subarena(const Arena& arena, const StateSet& states);

struct AttractorResult {
  StateSet region;
  std::vector<std::int32_t> strategy;  // per state: successor, -1 outside/none
  std::vector<std::int32_t> rank;      // per state: level, -1 outside
};

/// Positive-probability attractor of `player` to `target` within `universe`
/// (all states when omitted): the player's and Random states join with some
/// successor inside, opponent states with all universe-successors inside.
/// The strategy is pure, memoryless and rank-decreasing.
AttractorResult attractor(const Arena& arena, Owner player, const StateSet& target);
AttractorResult attractor(const Arena& arena, Owner player, const StateSet& target,
                          const StateSet& universe);

/// True iff `player` cannot leave U: the player's and Random states of U
/// keep all universe-successors inside, and every opponent state of U has
/// one.
bool is_trap(const Arena& arena, Owner player, const StateSet& set);
bool is_trap(const Arena& arena, Owner player, const StateSet& set, const StateSet& universe);

}  // namespace muller
