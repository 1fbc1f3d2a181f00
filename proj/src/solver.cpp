#include "muller/solver.hpp"

#include <algorithm>

namespace muller {

namespace {

struct Engine {
  const Arena& arena;
  const ZielonkaTree& tree;

  StateSet coloured_outside(ColourSet label, ColourSet child, const StateSet& universe) const {
    return arena.states_coloured_in(label - child) & universe;
  }

  /// Eve's almost-sure region for the condition restricted to `node`,
  /// within the subarena `universe`.
  StateSet region(const StateSet& universe, NodeId node, SolveTrace* trace) const {
    const auto& n = tree.nodes[node];
    if (trace) {
      trace->label = n.label;
      trace->owner = n.owner;
    }
    if (n.children.empty()) return n.owner == Owner::Eve ? universe : StateSet(arena.size());

    if (n.owner == Owner::Eve) {
      // remove Adam-positive parts until every child subgame is won
      // everywhere; the remainder is winning by the memory-cycling strategy
      StateSet cur = universe;
      bool changed = true;
      while (changed && cur.any()) {
        changed = false;
        for (NodeId child : n.children) {
          StateSet base = coloured_outside(n.label, tree.nodes[child].label, cur);
          StateSet escape = attractor(arena, Owner::Eve, base, cur).region;
          StateSet sub = cur - escape;
          if (sub.none()) continue;
          auto subtrace = trace ? std::make_unique<SolveTrace>() : nullptr;
          StateSet won = region(sub, child, subtrace.get());
          StateSet lost = sub - won;
          if (lost.none()) continue;
          StateSet removed = attractor(arena, Owner::Adam, lost, cur).region;
          if (trace) {
            trace->steps.push_back(
                {tree.nodes[child].label, cur, lost, removed, false});
            trace->children.push_back(std::move(subtrace));
          }
          cur -= removed;
          changed = true;
          break;
        }
      }
      return cur;
    }

    // Adam-owned label: peel embedded traps in which Eve wins the child
    // condition everywhere; what their attractors cover is hers.
    StateSet residual = universe;
    bool changed = true;
    while (changed && residual.any()) {
      changed = false;
      for (NodeId child : n.children) {
        StateSet base = coloured_outside(n.label, tree.nodes[child].label, residual);
        StateSet off = attractor(arena, Owner::Adam, base, residual).region;
        StateSet sub = residual - off;
        if (sub.none()) continue;
        auto subtrace = trace ? std::make_unique<SolveTrace>() : nullptr;
        StateSet trap = region(sub, child, subtrace.get());
        if (trap.none()) continue;
        StateSet layer = attractor(arena, Owner::Eve, trap, residual).region;
        if (trace) {
          trace->steps.push_back({tree.nodes[child].label, residual, trap, layer, true});
          trace->children.push_back(std::move(subtrace));
        }
        residual -= layer;
        changed = true;
        break;
      }
    }
    return universe - residual;
  }

  // ---- synthesis ----

  struct Local {
    std::size_t memories = 1;
    // [state][mem] tables over the full arena index space
    std::vector<std::vector<StrategyTransducer::Dist>> next;
    std::vector<std::vector<StrategyTransducer::MemDist>> update;

    explicit Local(std::size_t n, std::size_t m = 1)
        : memories(m),
          next(n, std::vector<StrategyTransducer::Dist>(m)),
          update(n, std::vector<StrategyTransducer::MemDist>(m)) {}
  };

  StrategyTransducer::Dist uniform_moves(StateIndex s, const StateSet& universe) const {
    std::vector<StateIndex> targets;
    for (StateIndex t : arena.succ[s])
      if (universe.test(t)) targets.push_back(t);
    StrategyTransducer::Dist d;
    Rational p(1, static_cast<std::int64_t>(targets.size()));
    for (StateIndex t : targets) d.push_back({t, p});
    return d;
  }

  Local synth(const StateSet& universe, NodeId node) const {
    const auto& n = tree.nodes[node];
    std::size_t size = arena.size();

    if (n.children.empty()) {
      if (n.owner == Owner::Adam && universe.any())
        throw NotWinningEverywhere(arena.states[universe.find_first()].name);
      Local out(size);
      for (std::size_t s = universe.find_first(); s != StateSet::npos;
           s = universe.find_next(s))
        if (arena.states[s].owner == Owner::Eve)
          out.next[s][0] = uniform_moves(static_cast<StateIndex>(s), universe);
      return out;
    }

    if (n.owner == Owner::Adam) return synth_adam(universe, node);
    return synth_eve(universe, node);
  }

  /// Adam-owned label: embedded traps merged over one identified memory set.
  Local synth_adam(const StateSet& universe, NodeId node) const {
    const auto& n = tree.nodes[node];
    std::size_t size = arena.size();

    struct Piece {
      StateSet trap;
      StateSet layer;
      AttractorResult attr;
      Local strat{0};
    };
    std::vector<Piece> pieces;

    StateSet residual = universe;
    bool changed = true;
    while (changed && residual.any()) {
      changed = false;
      for (NodeId child : n.children) {
        StateSet base = coloured_outside(n.label, tree.nodes[child].label, residual);
        StateSet off = attractor(arena, Owner::Adam, base, residual).region;
        StateSet sub = residual - off;
        if (sub.none()) continue;
        StateSet trap = region(sub, child, nullptr);
        if (trap.none()) continue;
        Piece piece;
        piece.trap = trap;
        piece.attr = attractor(arena, Owner::Eve, trap, residual);
        piece.layer = piece.attr.region;
        piece.strat = synth(trap, child);
        residual -= piece.layer;
        pieces.push_back(std::move(piece));
        changed = true;
        break;
      }
    }
    if (residual.any()) throw NotWinningEverywhere(arena.states[residual.find_first()].name);

    std::size_t memories = 1;
    for (const auto& p : pieces) memories = std::max(memories, p.strat.memories);
    Local out(size, memories);
    for (const auto& piece : pieces) {
      for (std::size_t s = piece.layer.find_first(); s != StateSet::npos;
           s = piece.layer.find_next(s)) {
        bool inside = piece.trap.test(s);
        for (std::size_t g = 0; g < memories; ++g) {
          if (inside) {
            // identify memories: out-of-range states fall back to the
            // sub-strategy's initial state
            std::size_t local = g < piece.strat.memories ? g : 0;
            out.next[s][g] = piece.strat.next[s][local];
            out.update[s][g] = piece.strat.update[s][local];
          } else {
            if (arena.states[s].owner == Owner::Eve)
              out.next[s][g] = {{static_cast<StateIndex>(piece.attr.strategy[s]), Rational(1)}};
            out.update[s][g] = {{static_cast<MemIndex>(g), Rational(1)}};
          }
        }
      }
    }
    return out;
  }

  /// Eve-owned label: disjoint union of the child strategies, cycling on
  /// colours that leave the current child's label; one extra uniform state
  /// when some child is a leaf.
  Local synth_eve(const StateSet& universe, NodeId node) const {
    const auto& n = tree.nodes[node];
    std::size_t size = arena.size();

    std::vector<NodeId> heavy;
    bool leaves = false;
    for (NodeId c : n.children) {
      if (tree.is_leaf(c))
        leaves = true;
      else
        heavy.push_back(c);
    }
    std::size_t k = heavy.size();

    if (leaves) {
      // winning everywhere forces the escape attractor of every leaf child
      // to cover the arena; checked here because the uniform state relies
      // on it
      for (NodeId c : n.children) {
        if (!tree.is_leaf(c)) continue;
        StateSet base = coloured_outside(n.label, tree.nodes[c].label, universe);
        StateSet esc = attractor(arena, Owner::Eve, base, universe).region;
        if (esc != universe)
          throw NotWinningEverywhere(arena.states[(universe - esc).find_first()].name);
      }
    }

    struct Comp {
      StateSet base;      // coloured outside the child label
      StateSet attr;      // escape attractor
      AttractorResult a;
      StateSet inner;     // universe minus attractor
      Local strat{0};
      std::size_t offset = 0;
    };
    std::vector<Comp> comps(k);
    std::size_t memories = leaves ? 1 : 0;
    for (std::size_t i = 0; i < k; ++i) {
      Comp& comp = comps[i];
      comp.base = coloured_outside(n.label, tree.nodes[heavy[i]].label, universe);
      comp.a = attractor(arena, Owner::Eve, comp.base, universe);
      comp.attr = comp.a.region;
      comp.inner = universe - comp.attr;
      comp.strat = synth(comp.inner, heavy[i]);
      comp.offset = memories;
      memories += comp.strat.memories;
    }
    if (k == 0 && !leaves) throw Error("internal: childless non-leaf node");

    Local out(size, memories);
    // entry point of the component following i in the cycle
    auto next_entry = [&](std::size_t i) -> MemIndex {
      if (i + 1 < k) return static_cast<MemIndex>(comps[i + 1].offset);
      if (leaves) return 0;
      return static_cast<MemIndex>(comps[0].offset);
    };

    for (std::size_t i = 0; i < k; ++i) {
      const Comp& comp = comps[i];
      for (std::size_t local = 0; local < comp.strat.memories; ++local) {
        std::size_t g = comp.offset + local;
        for (std::size_t s = universe.find_first(); s != StateSet::npos;
             s = universe.find_next(s)) {
          bool is_eve = arena.states[s].owner == Owner::Eve;
          if (comp.base.test(s)) {
            if (is_eve) out.next[s][g] = uniform_moves(static_cast<StateIndex>(s), universe);
            out.update[s][g] = {{next_entry(i), Rational(1)}};
          } else if (comp.attr.test(s)) {
            if (is_eve)
              out.next[s][g] = {{static_cast<StateIndex>(comp.a.strategy[s]), Rational(1)}};
            out.update[s][g] = {{static_cast<MemIndex>(g), Rational(1)}};
          } else {
            if (is_eve) out.next[s][g] = comp.strat.next[s][local];
            for (const auto& [m, p] : comp.strat.update[s][local])
              out.update[s][g].push_back({static_cast<MemIndex>(comp.offset + m), p});
            if (out.update[s][g].empty())
              out.update[s][g] = {{static_cast<MemIndex>(g), Rational(1)}};
          }
        }
      }
    }

    if (leaves) {
      // state 0: play uniformly, leave with probability one half
      for (std::size_t s = universe.find_first(); s != StateSet::npos;
           s = universe.find_next(s)) {
        if (arena.states[s].owner == Owner::Eve)
          out.next[s][0] = uniform_moves(static_cast<StateIndex>(s), universe);
        if (k == 0)
          out.update[s][0] = {{0, Rational(1)}};
        else
          out.update[s][0] = {{0, Rational(1, 2)},
                              {static_cast<MemIndex>(comps[0].offset), Rational(1, 2)}};
      }
    }
    return out;
  }
};

}  // namespace

SolveResult solve(const Arena& arena, const MullerCondition& condition) {
  if (!(arena.alphabet == condition.alphabet()))
    throw AlphabetMismatch("arena and condition alphabets differ");
  ZielonkaTree tree = build_zielonka_tree(condition);
  Engine engine{arena, tree};
  SolveResult result;
  result.trace = std::make_unique<SolveTrace>();
  result.eve_region = engine.region(arena.all_states(), tree.root, result.trace.get());
  result.adam_region = arena.all_states() - result.eve_region;
  return result;
}

StrategyTransducer synthesize(const Arena& arena, const MullerCondition& condition) {
  if (!(arena.alphabet == condition.alphabet()))
    throw AlphabetMismatch("arena and condition alphabets differ");
  ZielonkaTree tree = build_zielonka_tree(condition);
  Engine engine{arena, tree};
  auto local = engine.synth(arena.all_states(), tree.root);
  StrategyTransducer out = StrategyTransducer::blank(arena, Owner::Eve, local.memories);
  out.next = std::move(local.next);
  out.update = std::move(local.update);
  out.initial = 0;
  return out;
}

SynthesisResult solve_and_synthesize(const Arena& arena, const MullerCondition& condition) {
  SynthesisResult out{solve(arena, condition), std::nullopt};
  if (out.solved.eve_region.none()) return out;
  // the Eve region is a trap for Adam, hence a live and closed subarena
  SubArena sub = subarena(arena, out.solved.eve_region);
  ZielonkaTree tree = build_zielonka_tree(condition);
  Engine engine{arena, tree};
  auto local = engine.synth(sub.states, tree.root);
  StrategyTransducer strat = StrategyTransducer::blank(arena, Owner::Eve, local.memories);
  strat.next = std::move(local.next);
  strat.update = std::move(local.update);
  out.strategy = std::move(strat);
  return out;
}

}  // namespace muller
