#include "muller/witness.hpp"

#include <algorithm>

namespace muller {

namespace {

std::string label_key(const ColourAlphabet& alphabet, ColourSet s) {
  std::string out;
  for (std::size_t i : s.indices()) {
    if (!out.empty()) out += ",";
    out += alphabet.name(i);
  }
  return out.empty() ? "{}" : out;
}

}  // namespace

GadgetFragment build_pick_star(const ColourAlphabet& alphabet, ColourSet colours) {
  GadgetFragment out;
  ArenaBuilder b(alphabet);
  b.state("in", Owner::Adam);
  std::vector<std::size_t> order = colours.indices();
  for (std::size_t c : order) {
    b.state("visit:" + alphabet.name(c), Owner::Adam, alphabet.name(c));
    b.state("skip:" + alphabet.name(c), Owner::Adam);
  }
  b.state("out", Owner::Adam);
  std::string prev_visit = "in", prev_skip = "in";
  for (std::size_t c : order) {
    const std::string visit = "visit:" + alphabet.name(c);
    const std::string skip = "skip:" + alphabet.name(c);
    b.edge(prev_visit, visit).edge(prev_visit, skip);
    if (prev_skip != prev_visit) b.edge(prev_skip, visit).edge(prev_skip, skip);
    prev_visit = visit;
    prev_skip = skip;
  }
  b.edge(prev_visit, "out");
  if (prev_skip != prev_visit) b.edge(prev_skip, "out");
  b.edge("out", "in");  // placeholder successor so the fragment validates alone
  out.arena = b.build();
  out.entry = *out.arena.index("in");
  out.exit = *out.arena.index("out");
  return out;
}

GadgetFragment build_pick(const ColourAlphabet& alphabet, ColourSet colours) {
  if (colours.is_empty()) throw EmptyChoice("pick gadget over the empty set");
  GadgetFragment out;
  ArenaBuilder b(alphabet);
  b.state("in", Owner::Adam);
  for (std::size_t c : colours.indices()) b.state(alphabet.name(c), Owner::Adam, alphabet.name(c));
  b.state("out", Owner::Adam);
  for (std::size_t c : colours.indices()) {
    b.edge("in", alphabet.name(c));
    b.edge(alphabet.name(c), "out");
  }
  b.edge("out", "in");
  out.arena = b.build();
  out.entry = *out.arena.index("in");
  out.exit = *out.arena.index("out");
  return out;
}

namespace {

struct WitnessBuilder {
  const ColourAlphabet& alphabet;
  const CroppedDag& cropped;
  WitnessArena out;
  ArenaBuilder builder;

  WitnessBuilder(const ColourAlphabet& a, const CroppedDag& c)
      : alphabet(a), cropped(c), builder(a) {}

  std::string add(std::string name, Owner owner, WitnessArena::StateInfo info,
                  std::optional<std::string> colour = std::nullopt) {
    builder.state(name, owner, colour);
    out.info.push_back(info);
    return name;
  }

  /// Visit-any-subset chain over `stars`, then a one-colour pick over
  /// `picks` (skipped when empty, as for leaf chains), ending at the root.
  /// Returns the entry state name.
  std::string add_chain(const std::string& key, NodeId node, NodeId child, bool leaf_chain,
                        ColourSet stars, ColourSet picks, const std::string& root_name) {
    using R = WitnessArena::Role;
    WitnessArena::StateInfo base{R::StarEntry, node, child, leaf_chain, std::nullopt};
    std::string entry = add("star:in:" + key, Owner::Adam, base);
    std::vector<std::string> prev{entry};
    for (std::size_t c : stars.indices()) {
      base.colour = c;  // for skip states: the colour being bypassed
      base.role = R::StarVisit;
      std::string visit =
          add("star:" + key + ":" + alphabet.name(c), Owner::Adam, base, alphabet.name(c));
      base.role = R::StarSkip;
      std::string skip = add("star:" + key + ":-" + alphabet.name(c), Owner::Adam, base);
      for (const auto& p : prev) builder.edge(p, visit), builder.edge(p, skip);
      prev = {visit, skip};
    }
    base.colour = std::nullopt;
    base.role = R::StarExit;
    std::string star_exit = add("star:out:" + key, Owner::Adam, base);
    for (const auto& p : prev) builder.edge(p, star_exit);

    if (picks.is_empty()) {
      builder.edge(star_exit, root_name);
      return entry;
    }
    base.role = R::PickEntry;
    std::string pick_entry = add("pick:in:" + key, Owner::Adam, base);
    builder.edge(star_exit, pick_entry);
    base.role = R::PickExit;
    std::string pick_exit = add("pick:out:" + key, Owner::Adam, base);
    for (std::size_t c : picks.indices()) {
      base.role = R::PickVisit;
      base.colour = c;
      std::string v =
          add("pick:" + key + ":" + alphabet.name(c), Owner::Adam, base, alphabet.name(c));
      builder.edge(pick_entry, v);
      builder.edge(v, pick_exit);
    }
    builder.edge(pick_exit, root_name);
    return entry;
  }

  WitnessArena run() {
    using R = WitnessArena::Role;
    const ZielonkaDag& dag = *cropped.source;
    std::string root_name = "eve:" + label_key(alphabet, dag.nodes[cropped.root].label);

    // Eve node states first, in source order, so the root comes out stable
    std::vector<NodeId> eve_order;
    for (NodeId n = 0; n < dag.nodes.size(); ++n)
      if (cropped.in_dag[n] && dag.nodes[n].owner == Owner::Eve) eve_order.push_back(n);
    for (NodeId n : eve_order)
      add("eve:" + label_key(alphabet, dag.nodes[n].label), Owner::Eve, {R::EveNode, n, 0, false, {}});

    for (NodeId n : eve_order) {
      std::string from = "eve:" + label_key(alphabet, dag.nodes[n].label);
      ColourSet label = dag.nodes[n].label;
      auto kids = cropped.children(n);
      if (kids.empty()) {
        // leaf of the cropped DAG owned by Eve: one visit-any chain and back
        std::string key = "leaf:" + label_key(alphabet, label);
        std::string entry = add_chain(key, n, n, true, label, ColourSet::empty(), root_name);
        builder.edge(from, entry);
        continue;
      }
      for (NodeId a : kids) {
        ColourSet child_label = dag.nodes[a].label;
        std::string key =
            label_key(alphabet, label) + "|" + label_key(alphabet, child_label);
        std::string pair = add("pair:" + key, Owner::Adam, {R::Pair, n, a, false, {}});
        builder.edge(from, pair);
        auto grandkids = cropped.children(a);
        if (!grandkids.empty())
          builder.edge(pair,
                       "eve:" + label_key(alphabet, dag.nodes[grandkids.front()].label));
        std::string entry = add_chain(key, n, a, false, label, label - child_label, root_name);
        builder.edge(pair, entry);
      }
    }

    out.arena = builder.build();
    out.cropped = cropped;
    out.root_state = *out.arena.index(root_name);
    for (NodeId n : eve_order)
      out.eve_nodes[n] = *out.arena.index("eve:" + label_key(alphabet, dag.nodes[n].label));
    for (NodeId n : eve_order)
      for (NodeId a : cropped.children(n))
        out.pair_states[{n, a}] =
            *out.arena.index("pair:" + label_key(alphabet, dag.nodes[n].label) + "|" +
                             label_key(alphabet, dag.nodes[a].label));
    return std::move(out);
  }
};

/// Eve node positions along a branch: node -> index in the branch.
std::map<NodeId, std::size_t> eve_positions(const CroppedDag& cropped, const Branch& b) {
  std::map<NodeId, std::size_t> out;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (cropped.node(b[i]).owner == Owner::Eve) out[b[i]] = i;
  return out;
}

}  // namespace

WitnessArena build_witness(const ColourAlphabet& alphabet, const CroppedDag& cropped) {
  WitnessBuilder wb(alphabet, cropped);
  return wb.run();
}

StrategyTransducer sure_strategy(const CroppedDag& cropped, const WitnessArena& witness) {
  const Arena& arena = witness.arena;
  auto all_branches = branches(cropped);
  StrategyTransducer out = StrategyTransducer::blank(arena, Owner::Eve, all_branches.size());
  for (std::size_t i = 0; i < all_branches.size(); ++i) out.memory[i] = "b" + std::to_string(i);
  out.initial = 0;

  // branch lookup by prefix for the memory update rule
  auto branch_with_prefix = [&](const Branch& prefix) -> MemIndex {
    for (std::size_t i = 0; i < all_branches.size(); ++i) {
      if (all_branches[i].size() < prefix.size()) continue;
      if (std::equal(prefix.begin(), prefix.end(), all_branches[i].begin()))
        return static_cast<MemIndex>(i);
    }
    throw Error("internal: no branch extends the updated prefix");
  };

  for (std::size_t m = 0; m < all_branches.size(); ++m) {
    const Branch& b = all_branches[m];
    auto positions = eve_positions(cropped, b);
    // moves: at an Eve node of the branch, go to its pair with the branch
    // child; off-branch Eve states keep a fixed fallback
    for (StateIndex s = 0; s < arena.size(); ++s) {
      if (arena.states[s].owner != Owner::Eve) continue;
      StateIndex target = arena.succ[s].front();
      NodeId node = witness.info[s].node;
      auto pos = positions.find(node);
      if (pos != positions.end() && pos->second + 1 < b.size())
        target = witness.pair_states.at({node, b[pos->second + 1]});
      out.next[s][m] = {{target, Rational(1)}};
    }
    // updates: on entering the stop chain of the branch pair at level i,
    // rotate to the branch through the next child when there are several
    for (StateIndex s = 0; s < arena.size(); ++s) {
      const auto& info = witness.info[s];
      if (info.role != WitnessArena::Role::StarEntry || info.leaf_chain) continue;
      auto pos = positions.find(info.node);
      if (pos == positions.end()) continue;
      std::size_t i = pos->second;
      if (i + 1 >= b.size() || b[i + 1] != info.child) continue;
      auto siblings = cropped.children(info.node);
      if (siblings.size() <= 1) continue;
      auto at = std::find(siblings.begin(), siblings.end(), info.child);
      NodeId next_child = (at + 1 == siblings.end()) ? siblings.front() : *(at + 1);
      Branch prefix(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(i + 1));
      prefix.push_back(next_child);
      out.update[s][m] = {{branch_with_prefix(prefix), Rational(1)}};
    }
  }
  return out;
}

StrategyTransducer branch_strategy(const CroppedDag& cropped, const Branch& b,
                                   const WitnessArena& witness) {
  auto all = branches(cropped);
  if (std::find(all.begin(), all.end(), b) == all.end())
    throw BranchMismatch("not a branch of this cropped DAG");
  const Arena& arena = witness.arena;
  auto positions = eve_positions(cropped, b);

  std::vector<std::int32_t> moves(arena.size(), -1);
  // level of a chain: the branch position of its pair's parent node; the
  // stop at level i must realize exactly the colours of the branch child
  // A_i, except at the last level, which realizes the full label E_l.
  auto stop_target = [&](NodeId node, NodeId child, bool leaf_chain) -> std::optional<ColourSet> {
    auto pos = positions.find(node);
    if (pos == positions.end()) return std::nullopt;  // unreachable chain
    std::size_t i = pos->second;
    bool last = i + 2 >= b.size();  // E_l (leaf chain) or pair (E_l, A_l)
    if (leaf_chain) return cropped.node(node).label;
    if (last && i + 1 < b.size() && b[i + 1] == child) return cropped.node(node).label;
    return cropped.node(b[i + 1]).label;  // colours of A_i
  };

  for (StateIndex s = 0; s < arena.size(); ++s) {
    if (arena.states[s].owner != Owner::Adam) continue;
    const auto& info = witness.info[s];
    const auto& succ = arena.succ[s];
    moves[s] = static_cast<std::int32_t>(succ.front());
    switch (info.role) {
      case WitnessArena::Role::Pair: {
        auto pos = positions.find(info.node);
        if (pos == positions.end()) break;  // unreachable under tau_b
        std::size_t i = pos->second;
        bool on_branch = i + 1 < b.size() && b[i + 1] == info.child;
        bool last = i + 2 >= b.size();
        StateIndex chain = 0;
        for (StateIndex t : succ)
          if (witness.info[t].role == WitnessArena::Role::StarEntry) chain = t;
        if (on_branch && !last) {
          // proceed towards the next Eve node of the branch
          for (StateIndex t : succ)
            if (witness.info[t].role == WitnessArena::Role::EveNode)
              moves[s] = static_cast<std::int32_t>(t);
        } else {
          moves[s] = static_cast<std::int32_t>(chain);
        }
        break;
      }
      case WitnessArena::Role::StarEntry:
      case WitnessArena::Role::StarVisit:
      case WitnessArena::Role::StarSkip: {
        auto target = stop_target(info.node, info.child, info.leaf_chain);
        if (!target) break;
        // choose visit states exactly for the target's colours
        for (StateIndex t : succ) {
          const auto& ti = witness.info[t];
          if (ti.role == WitnessArena::Role::StarVisit) {
            if (target->test(*ti.colour)) moves[s] = static_cast<std::int32_t>(t);
          } else if (ti.role == WitnessArena::Role::StarSkip) {
            if (!target->test(*ti.colour)) moves[s] = static_cast<std::int32_t>(t);
          } else if (ti.role == WitnessArena::Role::StarExit) {
            moves[s] = static_cast<std::int32_t>(t);
          }
        }
        break;
      }
      case WitnessArena::Role::PickEntry: {
        auto target = stop_target(info.node, info.child, info.leaf_chain);
        if (!target) break;
        ColourSet pickable = *target & (cropped.node(info.node).label -
                                        cropped.node(info.child).label);
        if (pickable.is_empty()) break;  // defensive; cannot happen on a branch stop
        std::size_t want = pickable.indices().front();
        for (StateIndex t : succ)
          if (witness.info[t].colour == want) moves[s] = static_cast<std::int32_t>(t);
        break;
      }
      default:
        break;
    }
  }
  return pure_memoryless(arena, Owner::Adam, moves);
}

}  // namespace muller
