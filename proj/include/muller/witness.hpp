#pragma once

#include <map>

#include "muller/strategy.hpp"
#include "muller/zielonka.hpp"

namespace muller {

/// The lower-bound arena built from a cropped DAG: a traversal game from the
/// root towards the leaves. Eve states are in bijection with the Eve nodes
/// of the cropped DAG, Adam decision states with its parent-child pairs, and
/// colours appear only inside the visit gadgets.
struct WitnessArena {
  enum class Role {
    EveNode,    // decision state of an Eve node
    Pair,       // Adam's stop-or-proceed state for a parent-child pair
    StarEntry,  // entry of a visit-any-subset gadget
    StarVisit,  // coloured visit state
    StarSkip,   // colourless bypass
    StarExit,
    PickEntry,  // entry of a visit-exactly-one gadget
    PickVisit,  // coloured choice
    PickExit,
  };
  struct StateInfo {
    Role role;
    NodeId node = 0;        // Eve node (EveNode) or pair parent (others)
    NodeId child = 0;       // pair child; meaningful unless role == EveNode
    bool leaf_chain = false;  // gadget chain of an Eve leaf (no pair child)
    std::optional<std::size_t> colour;  // visit states
  };

  Arena arena;
  CroppedDag cropped;
  StateIndex root_state = 0;
  std::map<NodeId, StateIndex> eve_nodes;
  std::map<std::pair<NodeId, NodeId>, StateIndex> pair_states;
  std::vector<StateInfo> info;  // per arena state

  WitnessArena() : arena(ColourAlphabet({"?"})) {}
};

/// Gadget fragment: entry, exit, and which colour subsets a traversal can
/// realize. Used standalone for testing; build_witness inlines the same
/// construction.
struct GadgetFragment {
  Arena arena;
  StateIndex entry = 0;
  StateIndex exit = 0;

  GadgetFragment() : arena(ColourAlphabet({"?"})) {}
};

/// Visit-any-subset gadget: a chain of visit/skip choices, one per colour of
/// C in canonical order. 2|C|+2 states.
GadgetFragment build_pick_star(const ColourAlphabet& alphabet, ColourSet colours);

/// Visit-exactly-one gadget over D. |D|+2 states. Throws EmptyChoice on an
/// empty D.
GadgetFragment build_pick(const ColourAlphabet& alphabet, ColourSet colours);

WitnessArena build_witness(const ColourAlphabet& alphabet, const CroppedDag& cropped);

/// Eve's pure strategy with one memory state per branch: follow the branch,
/// and when Adam stops a traversal at a node with several children, advance
/// to the branch through its next child.
StrategyTransducer sure_strategy(const CroppedDag& cropped, const WitnessArena& witness);

/// Adam's positional strategy punishing deviation from branch b: any stop at
/// a pair off the branch visits exactly the colours of the branch child at
/// that level; the final level visits the full label.
StrategyTransducer branch_strategy(const CroppedDag& cropped, const Branch& b,
                                   const WitnessArena& witness);

}  // namespace muller
