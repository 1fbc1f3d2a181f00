#include "muller/verifier.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <random>

namespace muller {

namespace {

StateSet reachable(const Arena& g, const StateSet& from) {
  StateSet seen = from;
  std::deque<std::size_t> queue;
  for (std::size_t s = from.find_first(); s != StateSet::npos; s = from.find_next(s))
    queue.push_back(s);
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    for (StateIndex t : g.succ[s])
      if (!seen.test(t)) {
        seen.set(t);
        queue.push_back(t);
      }
  }
  return seen;
}

/// Tarjan SCC over the subgraph induced by `alive`. Returns component ids in
/// a deterministic order.
struct SccResult {
  std::vector<std::int32_t> comp;  // -1 outside
  std::size_t count = 0;
};

SccResult scc_decompose(const Arena& g, const StateSet& alive) {
  SccResult res;
  res.comp.assign(g.size(), -1);
  std::vector<std::int32_t> low(g.size(), -1), num(g.size(), -1);
  std::vector<bool> on_stack(g.size(), false);
  std::vector<std::size_t> stack;
  std::int32_t counter = 0;

  // iterative Tarjan
  struct Frame {
    std::size_t v;
    std::size_t edge = 0;
  };
  for (std::size_t root = alive.find_first(); root != StateSet::npos;
       root = alive.find_next(root)) {
    if (num[root] >= 0) continue;
    std::vector<Frame> frames{{root}};
    num[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < g.succ[f.v].size()) {
        StateIndex w = g.succ[f.v][f.edge++];
        if (!alive.test(w)) continue;
        if (num[w] < 0) {
          num[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], num[w]);
        }
      } else {
        if (low[f.v] == num[f.v]) {
          while (true) {
            std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            res.comp[w] = static_cast<std::int32_t>(res.count);
            if (w == f.v) break;
          }
          ++res.count;
        }
        std::size_t v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return res;
}

}  // namespace

std::vector<EndComponent> maximal_end_components(const Arena& mdp, const StateSet& candidates) {
  StateSet alive = candidates;
  // a Random state whose support leaves the candidate set can be in no EC
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = alive.find_first(); s != StateSet::npos; s = alive.find_next(s)) {
      if (mdp.states[s].owner != Owner::Random) continue;
      for (StateIndex t : mdp.succ[s])
        if (!alive.test(t)) {
          alive.reset(s);
          changed = true;
          break;
        }
    }
    if (changed) continue;
    auto scc = scc_decompose(mdp, alive);
    for (std::size_t s = alive.find_first(); s != StateSet::npos; s = alive.find_next(s)) {
      std::int32_t k = scc.comp[s];
      bool ok;
      if (mdp.states[s].owner == Owner::Random) {
        ok = true;
        for (StateIndex t : mdp.succ[s])
          if (scc.comp[t] != k) {
            ok = false;
            break;
          }
      } else {
        ok = false;
        for (StateIndex t : mdp.succ[s])
          if (scc.comp[t] == k && t != s) {
            ok = true;
            break;
          }
        if (!ok) ok = mdp.has_edge(static_cast<StateIndex>(s), static_cast<StateIndex>(s));
      }
      // a trivial component (single state, no self loop) is not an EC
      if (ok) {
        bool internal_edge = false;
        for (StateIndex t : mdp.succ[s])
          if (scc.comp[t] == k) {
            internal_edge = true;
            break;
          }
        ok = internal_edge;
      }
      if (!ok) {
        alive.reset(s);
        changed = true;
      }
    }
  }
  auto scc = scc_decompose(mdp, alive);
  std::vector<EndComponent> out(scc.count);
  for (std::size_t s = alive.find_first(); s != StateSet::npos; s = alive.find_next(s)) {
    auto& ec = out[static_cast<std::size_t>(scc.comp[s])];
    if (ec.states.empty()) ec.states.resize(mdp.size());
    ec.states.set(s);
  }
  // drop empties (none expected) and fill witness actions
  std::vector<EndComponent> final_out;
  for (auto& ec : out) {
    if (ec.states.empty() || ec.states.none()) continue;
    for (std::size_t s = ec.states.find_first(); s != StateSet::npos;
         s = ec.states.find_next(s)) {
      if (mdp.states[s].owner != Owner::Adam) continue;
      std::vector<StateIndex> kept;
      for (StateIndex t : mdp.succ[s])
        if (ec.states.test(t)) kept.push_back(t);
      ec.witness_actions.emplace(static_cast<StateIndex>(s), std::move(kept));
    }
    final_out.push_back(std::move(ec));
  }
  return final_out;
}

namespace {

/// Positional Adam moves reaching `target` with positive probability from
/// every state that can reach it, plus uniform-inside moves within it.
std::vector<std::int32_t> adam_reach_and_stay(const Arena& mdp, const EndComponent& ec) {
  std::vector<std::int32_t> moves(mdp.size(), -1);
  // backward BFS over all edges; Adam states record the move
  StateSet seen = ec.states;
  std::deque<std::size_t> queue;
  for (std::size_t s = seen.find_first(); s != StateSet::npos; s = seen.find_next(s))
    queue.push_back(s);
  while (!queue.empty()) {
    std::size_t t = queue.front();
    queue.pop_front();
    for (StateIndex s : mdp.pred[t]) {
      if (seen.test(s)) continue;
      seen.set(s);
      if (mdp.states[s].owner == Owner::Adam) moves[s] = static_cast<std::int32_t>(t);
      queue.push_back(s);
    }
  }
  // inside the component, keep the first witness action (the replayed
  // counterexample mixes uniformly; one retained move is enough to certify)
  for (const auto& [s, kept] : ec.witness_actions)
    if (!kept.empty()) moves[s] = static_cast<std::int32_t>(kept.front());
  return moves;
}

ColourSet project_colours(const ProductMdp& p, const StateSet& set) {
  ColourSet out;
  for (std::size_t s = set.find_first(); s != StateSet::npos; s = set.find_next(s))
    if (p.mdp.states[s].colour) out.set(*p.mdp.states[s].colour);
  return out;
}

VerificationReport almost_sure_of_product(ProductMdp prod, const MullerCondition& condition,
                                          const StateSet& from) {
  const Arena& mdp = prod.mdp;
  StateSet reach = reachable(mdp, from);
  std::uint64_t all = condition.alphabet().all().bits();
  for (std::uint64_t mask = 0;; ++mask) {
    ColourSet bad(mask);
    if (!condition.contains(bad)) {
      StateSet cand = reach;
      for (std::size_t s = cand.find_first(); s != StateSet::npos; s = cand.find_next(s)) {
        auto c = mdp.states[s].colour;
        if (c && !bad.test(*c)) cand.reset(s);
      }
      if (cand.any()) {
        for (auto& ec : maximal_end_components(mdp, cand)) {
          if (project_colours(prod, ec.states) != bad) continue;
          Counterexample cex;
          cex.inf_colours = bad;
          cex.end_component = std::move(ec);
          cex.adam_moves = adam_reach_and_stay(mdp, *cex.end_component);
          // deterministic start: the first initial state that reaches the EC
          StateSet can_reach = cex.end_component->states;
          // backward closure over all edges
          {
            std::deque<std::size_t> queue;
            for (std::size_t s = can_reach.find_first(); s != StateSet::npos;
                 s = can_reach.find_next(s))
              queue.push_back(s);
            while (!queue.empty()) {
              std::size_t t = queue.front();
              queue.pop_front();
              for (StateIndex s : mdp.pred[t])
                if (!can_reach.test(s)) {
                  can_reach.set(s);
                  queue.push_back(s);
                }
            }
          }
          for (std::size_t s = from.find_first(); s != StateSet::npos; s = from.find_next(s))
            if (can_reach.test(s)) {
              cex.start = static_cast<StateIndex>(s);
              break;
            }
          cex.product = std::move(prod);
          VerificationReport report;
          report.verdict = VerificationReport::Verdict::Refuted;
          report.counterexample = std::move(cex);
          return report;
        }
      }
    }
    if (mask == all) break;
  }
  return {VerificationReport::Verdict::AlmostSure, std::nullopt, std::nullopt};
}

}  // namespace

VerificationReport check_almost_sure(const Arena& arena, const MullerCondition& condition,
                                     const StrategyTransducer& eve, const StateSet& from) {
  if (!(arena.alphabet == condition.alphabet()))
    throw AlphabetMismatch("arena and condition alphabets differ");
  if (arena.alphabet.size() > 20)
    throw Unsupported("end-component search enumerates colour subsets; alphabet too large");
  ProductMdp prod = product(arena, eve, from);
  StateSet start = prod.initial_set();
  return almost_sure_of_product(std::move(prod), condition, start);
}

VerificationReport check_almost_sure(const Arena& arena, const MullerCondition& condition,
                                     const StrategyTransducer& eve) {
  return check_almost_sure(arena, condition, eve, arena.all_states());
}

VerificationReport check_almost_sure(const Arena& arena, const MullerCondition& condition,
                                     const SupportStrategy& eve) {
  return check_almost_sure(arena, condition, uniformize(arena, eve));
}

VerificationReport check_sure_win(const Arena& arena, const MullerCondition& condition,
                                  const StrategyTransducer& eve) {
  if (!(arena.alphabet == condition.alphabet()))
    throw AlphabetMismatch("arena and condition alphabets differ");
  if (!arena.two_player())
    throw Unsupported("sure winning is checked on 2-player arenas only");
  if (arena.alphabet.size() > 20)
    throw Unsupported("loop-set search enumerates colour subsets; alphabet too large");
  ProductMdp prod = product(arena, eve);
  const Arena& g = prod.mdp;
  StateSet reach = reachable(g, prod.initial_set());

  std::uint64_t all = condition.alphabet().all().bits();
  for (std::uint64_t mask = 0;; ++mask) {
    ColourSet bad(mask);
    if (!condition.contains(bad)) {
      StateSet cand = reach;
      for (std::size_t s = cand.find_first(); s != StateSet::npos; s = cand.find_next(s)) {
        auto c = g.states[s].colour;
        if (c && !bad.test(*c)) cand.reset(s);
      }
      auto scc = scc_decompose(g, cand);
      std::vector<ColourSet> colours(scc.count);
      std::vector<bool> nontrivial(scc.count, false);
      std::vector<StateIndex> repr(scc.count, 0);
      for (std::size_t s = cand.find_first(); s != StateSet::npos; s = cand.find_next(s)) {
        auto k = static_cast<std::size_t>(scc.comp[s]);
        repr[k] = static_cast<StateIndex>(s);
        if (g.states[s].colour) colours[k].set(*g.states[s].colour);
        for (StateIndex t : g.succ[s])
          if (cand.test(t) && scc.comp[t] == scc.comp[s]) nontrivial[k] = true;
      }
      for (std::size_t k = 0; k < scc.count; ++k) {
        if (!nontrivial[k] || colours[k] != bad) continue;
        // lasso: path from an initial state to the component, then a cycle
        // visiting every member
        StateSet members(g.size());
        for (std::size_t s = cand.find_first(); s != StateSet::npos; s = cand.find_next(s))
          if (scc.comp[s] == static_cast<std::int32_t>(k)) members.set(s);
        Counterexample cex;
        cex.inf_colours = bad;
        // BFS from initial set to the component
        std::vector<std::int32_t> parent(g.size(), -1);
        std::deque<std::size_t> queue;
        StateSet seen(g.size());
        for (std::size_t s = prod.initial_set().find_first(); s != StateSet::npos;
             s = prod.initial_set().find_next(s)) {
          seen.set(s);
          queue.push_back(s);
        }
        std::int64_t hit = -1;
        while (!queue.empty() && hit < 0) {
          std::size_t s = queue.front();
          queue.pop_front();
          if (members.test(s)) {
            hit = static_cast<std::int64_t>(s);
            break;
          }
          for (StateIndex t : g.succ[s])
            if (!seen.test(t)) {
              seen.set(t);
              parent[t] = static_cast<std::int32_t>(s);
              queue.push_back(t);
            }
        }
        std::vector<StateIndex> prefix;
        for (std::int64_t v = hit; v >= 0; v = parent[static_cast<std::size_t>(v)])
          prefix.push_back(static_cast<StateIndex>(v));
        std::reverse(prefix.begin(), prefix.end());
        cex.start = prefix.front();
        cex.lasso_prefix = prefix;
        // cycle visiting all members: chain shortest internal paths
        std::vector<StateIndex> cycle;
        StateIndex cur = static_cast<StateIndex>(hit);
        StateSet todo = members;
        todo.reset(cur);
        auto path_inside = [&](StateIndex a, const StateSet& goal) {
          std::vector<std::int32_t> par(g.size(), -1);
          StateSet vis(g.size());
          std::deque<StateIndex> q{a};
          vis.set(a);
          StateIndex end = a;
          bool found = goal.test(a);
          while (!q.empty() && !found) {
            StateIndex s = q.front();
            q.pop_front();
            for (StateIndex t : g.succ[s]) {
              if (!members.test(t) || vis.test(t)) continue;
              vis.set(t);
              par[t] = static_cast<std::int32_t>(s);
              if (goal.test(t)) {
                end = t;
                found = true;
                break;
              }
              q.push_back(t);
            }
          }
          std::vector<StateIndex> path;
          for (std::int64_t v = end; v >= 0 && static_cast<StateIndex>(v) != a;
               v = par[static_cast<std::size_t>(v)])
            path.push_back(static_cast<StateIndex>(v));
          std::reverse(path.begin(), path.end());
          return path;  // excludes a; empty if a in goal already
        };
        while (todo.any()) {
          auto leg = path_inside(cur, todo);
          for (StateIndex s : leg) {
            cycle.push_back(s);
            todo.reset(s);
          }
          if (leg.empty()) break;
          cur = cycle.back();
        }
        // close the cycle back to the entry state
        if (cur != static_cast<StateIndex>(hit) || cycle.empty()) {
          StateSet goal(g.size());
          goal.set(static_cast<std::size_t>(hit));
          auto leg = path_inside(cur, goal);
          for (StateIndex s : leg) cycle.push_back(s);
          if (cycle.empty()) cycle.push_back(static_cast<StateIndex>(hit));  // self loop
        }
        cex.lasso_cycle = cycle;
        cex.adam_moves.assign(g.size(), -1);
        cex.product = std::move(prod);
        VerificationReport report;
        report.verdict = VerificationReport::Verdict::Refuted;
        report.counterexample = std::move(cex);
        return report;
      }
    }
    if (mask == all) break;
  }
  return {VerificationReport::Verdict::SureWin, std::nullopt, std::nullopt};
}

std::uint64_t count_support_strategies(const Arena& arena, Owner owner,
                                       std::size_t memory_size) {
  auto sat_mul = [](std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return std::uint64_t(0);
    if (a > UINT64_MAX / b) return UINT64_MAX;
    return a * b;
  };
  auto pow_minus_one = [&](std::size_t n) -> std::uint64_t {
    if (n >= 64) return UINT64_MAX;
    return (std::uint64_t(1) << n) - 1;
  };
  std::uint64_t total = 1;
  for (StateIndex s = 0; s < arena.size(); ++s) {
    if (arena.states[s].owner == owner)
      for (std::size_t m = 0; m < memory_size; ++m)
        total = sat_mul(total, pow_minus_one(arena.succ[s].size()));
    if (memory_size > 1)
      for (std::size_t m = 0; m < memory_size; ++m)
        total = sat_mul(total, pow_minus_one(memory_size));
  }
  return total;
}

namespace {

std::string encode_support(const SupportStrategy& s) {
  std::string out;
  out += char('0' + s.initial);
  for (const auto& per_state : s.next)
    for (const auto& supp : per_state) {
      out += '|';
      for (auto t : supp) out += std::to_string(t) + ",";
    }
  for (const auto& per_state : s.update)
    for (const auto& supp : per_state) {
      out += '|';
      for (auto t : supp) out += std::to_string(t) + ",";
    }
  return out;
}

SupportStrategy permute_memory(const SupportStrategy& s, const std::vector<MemIndex>& perm) {
  SupportStrategy out = s;
  out.initial = perm[s.initial];
  for (std::size_t st = 0; st < s.next.size(); ++st)
    for (std::size_t m = 0; m < s.memories; ++m) {
      out.next[st][perm[m]] = s.next[st][m];
      auto upd = s.update[st][m];
      for (auto& u : upd) u = perm[u];
      std::sort(upd.begin(), upd.end());
      out.update[st][perm[m]] = upd;
    }
  return out;
}

bool is_canonical(const SupportStrategy& s) {
  if (s.memories == 1) return true;
  std::vector<MemIndex> perm(s.memories);
  for (std::size_t i = 0; i < s.memories; ++i) perm[i] = static_cast<MemIndex>(i);
  std::string mine = encode_support(s);
  while (std::next_permutation(perm.begin(), perm.end())) {
    if (encode_support(permute_memory(s, perm)) < mine) return false;
  }
  return true;
}

}  // namespace

void enumerate_support_strategies(const Arena& arena, Owner owner, std::size_t memory_size,
                                  std::uint64_t max_candidates,
                                  const std::function<bool(const SupportStrategy&)>& yield) {
  if (memory_size < 1) throw Error("memory_size must be at least 1");
  std::uint64_t count = count_support_strategies(arena, owner, memory_size);
  if (count > max_candidates) throw ResourceLimit(count, max_candidates);

  // slots: next-move supports for the owner's states, then updates
  struct Slot {
    bool is_move;
    StateIndex state;
    MemIndex mem;
    std::size_t options;  // number of base elements; supports = 2^options - 1
  };
  std::vector<Slot> slots;
  for (StateIndex s = 0; s < arena.size(); ++s)
    if (arena.states[s].owner == owner)
      for (std::size_t m = 0; m < memory_size; ++m)
        slots.push_back({true, s, static_cast<MemIndex>(m), arena.succ[s].size()});
  if (memory_size > 1)
    for (StateIndex s = 0; s < arena.size(); ++s)
      for (std::size_t m = 0; m < memory_size; ++m)
        slots.push_back({false, s, static_cast<MemIndex>(m), memory_size});

  SupportStrategy current = SupportStrategy::blank(arena, owner, memory_size);
  current.initial = 0;

  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == slots.size()) {
      if (!is_canonical(current)) return true;
      return yield(current);
    }
    const Slot& slot = slots[i];
    std::uint64_t limit = std::uint64_t(1) << slot.options;
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
      if (slot.is_move) {
        auto& supp = current.next[slot.state][slot.mem];
        supp.clear();
        for (std::size_t k = 0; k < slot.options; ++k)
          if ((mask >> k) & 1) supp.push_back(arena.succ[slot.state][k]);
      } else {
        auto& supp = current.update[slot.state][slot.mem];
        supp.clear();
        for (std::size_t k = 0; k < slot.options; ++k)
          if ((mask >> k) & 1) supp.push_back(static_cast<MemIndex>(k));
      }
      if (!rec(i + 1)) return false;
    }
    if (slot.is_move)
      current.next[slot.state][slot.mem].clear();
    else
      current.update[slot.state][slot.mem].clear();
    return true;
  };
  rec(0);
}

std::uint64_t max_enum_from_env() {
  if (const char* v = std::getenv("MULLER_MAX_ENUM")) {
    try {
      return std::stoull(v);
    } catch (...) {
      throw ParseError(std::string("bad MULLER_MAX_ENUM value '") + v + "'");
    }
  }
  return 10000000ULL;
}

}  // namespace muller
