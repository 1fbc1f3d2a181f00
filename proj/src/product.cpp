#include "muller/product.hpp"

#include <deque>
#include <map>

namespace muller {

namespace {

struct Builder {
  const Arena& arena;
  const StrategyTransducer& eve;
  ProductMdp out;
  std::map<std::pair<StateIndex, MemIndex>, StateIndex> main_ids;
  std::map<std::pair<StateIndex, MemIndex>, StateIndex> gadget_ids;
  std::deque<StateIndex> queue;
  std::vector<std::vector<std::pair<StateIndex, Rational>>> edges;

  Builder(const Arena& a, const StrategyTransducer& e) : arena(a), eve(e) {
    out.mdp = Arena(arena.alphabet);
  }

  StateIndex add_state(StateIndex s, MemIndex m, bool gadget) {
    auto& ids = gadget ? gadget_ids : main_ids;
    auto it = ids.find({s, m});
    if (it != ids.end()) return it->second;
    StateIndex id = static_cast<StateIndex>(out.mdp.states.size());
    const auto& st = arena.states[s];
    std::string name = st.name + "#" + eve.memory[m] + (gadget ? "#in" : "");
    Owner owner = (!gadget && st.owner == Owner::Adam) ? Owner::Adam : Owner::Random;
    out.mdp.states.push_back({name, owner, st.colour});
    out.proj_state.push_back(s);
    out.proj_mem.push_back(m);
    out.gadget.push_back(gadget);
    edges.emplace_back();
    ids.emplace(std::make_pair(s, m), id);
    queue.push_back(id);
    return id;
  }

  void expand(StateIndex id) {
    StateIndex s = out.proj_state[id];
    MemIndex m = out.proj_mem[id];
    std::vector<std::pair<StateIndex, Rational>> row;  // edges grows during add_state
    if (out.gadget[id]) {
      // arrival at s with memory m: apply the update
      for (const auto& [m2, p] : eve.update_dist(s, m))
        row.push_back({add_state(s, m2, false), p});
    } else if (arena.states[s].owner == Owner::Adam) {
      for (StateIndex t : arena.succ[s]) row.push_back({add_state(t, m, true), Rational(0)});
    } else if (arena.states[s].owner == Owner::Eve) {
      if (!eve.defined(s, m)) throw StrategyIncomplete(arena.states[s].name, eve.memory[m]);
      for (const auto& [t, p] : eve.next[s][m])
        for (const auto& [m2, q] : eve.update_dist(t, m))
          row.push_back({add_state(t, m2, false), p * q});
    } else {
      for (std::size_t k = 0; k < arena.succ[s].size(); ++k) {
        StateIndex t = arena.succ[s][k];
        for (const auto& [m2, q] : eve.update_dist(t, m))
          row.push_back({add_state(t, m2, false), arena.delta[s][k] * q});
      }
    }
    edges[id] = std::move(row);
  }

  ProductMdp run(const StateSet& entries) {
    out.initial.assign(arena.size(), -1);
    for (std::size_t s = entries.find_first(); s != StateSet::npos; s = entries.find_next(s))
      out.initial[s] = add_state(static_cast<StateIndex>(s), eve.initial, false);
    while (!queue.empty()) {
      StateIndex id = queue.front();
      queue.pop_front();
      expand(id);
    }
    // freeze edge lists into the arena representation
    out.mdp.succ.assign(out.mdp.states.size(), {});
    out.mdp.pred.assign(out.mdp.states.size(), {});
    out.mdp.delta.assign(out.mdp.states.size(), {});
    for (StateIndex id = 0; id < out.mdp.states.size(); ++id) {
      auto& row = edges[id];
      std::sort(row.begin(), row.end());
      // merge duplicate targets (possible when distinct updates collide)
      std::vector<std::pair<StateIndex, Rational>> merged;
      for (const auto& e : row) {
        if (!merged.empty() && merged.back().first == e.first)
          merged.back().second += e.second;
        else
          merged.push_back(e);
      }
      for (const auto& [t, p] : merged) {
        out.mdp.succ[id].push_back(t);
        if (out.mdp.states[id].owner == Owner::Random) out.mdp.delta[id].push_back(p);
      }
      for (StateIndex t : out.mdp.succ[id]) out.mdp.pred[t].push_back(id);
    }
    for (auto& list : out.mdp.pred) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return std::move(out);
  }
};

}  // namespace

ProductMdp product(const Arena& arena, const StrategyTransducer& eve) {
  return product(arena, eve, arena.all_states());
}

ProductMdp product(const Arena& arena, const StrategyTransducer& eve, const StateSet& entries) {
  if (eve.owner != Owner::Eve) throw Unsupported("product expects an Eve strategy");
  Builder b(arena, eve);
  return b.run(entries);
}

ProductMdp product(const Arena& arena, const SupportStrategy& eve) {
  return product(arena, uniformize(arena, eve));
}

}  // namespace muller
