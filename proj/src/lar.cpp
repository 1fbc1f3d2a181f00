#include <algorithm>
#include <deque>
#include <map>

#include "muller/verifier.hpp"

namespace muller {

namespace {

/// Parity game on an explicit graph: max priority visited infinitely often
/// decides, even for Eve.
struct ParityGame {
  std::vector<Owner> owner;
  std::vector<std::vector<StateIndex>> succ;
  std::vector<std::vector<StateIndex>> pred;
  std::vector<int> priority;

  std::size_t size() const { return owner.size(); }
};

StateSet parity_attractor(const ParityGame& g, Owner player, StateSet target,
                          const StateSet& universe) {
  StateSet region = target & universe;
  std::deque<std::size_t> queue;
  for (std::size_t s = region.find_first(); s != StateSet::npos; s = region.find_next(s))
    queue.push_back(s);
  std::vector<std::size_t> out_degree(g.size(), 0);
  for (std::size_t s = universe.find_first(); s != StateSet::npos; s = universe.find_next(s))
    for (StateIndex t : g.succ[s])
      if (universe.test(t)) ++out_degree[s];
  while (!queue.empty()) {
    std::size_t t = queue.front();
    queue.pop_front();
    for (StateIndex s : g.pred[t]) {
      if (!universe.test(s) || region.test(s)) continue;
      if (g.owner[s] == player) {
        region.set(s);
        queue.push_back(s);
      } else if (--out_degree[s] == 0) {
        region.set(s);
        queue.push_back(s);
      }
    }
  }
  return region;
}

/// Classical recursive algorithm; returns Eve's winning region.
StateSet parity_solve(const ParityGame& g, const StateSet& universe) {
  if (universe.none()) return universe;
  int d = -1;
  for (std::size_t s = universe.find_first(); s != StateSet::npos; s = universe.find_next(s))
    d = std::max(d, g.priority[s]);
  if (d == 0) return universe;  // lowest priority is even: Eve wins everything
  Owner player = (d % 2 == 0) ? Owner::Eve : Owner::Adam;
  StateSet top(g.size());
  for (std::size_t s = universe.find_first(); s != StateSet::npos; s = universe.find_next(s))
    if (g.priority[s] == d) top.set(s);
  StateSet a = parity_attractor(g, player, top, universe);
  StateSet rest = universe - a;
  StateSet eve_rest = parity_solve(g, rest);
  StateSet opp_rest = (player == Owner::Eve) ? rest - eve_rest : eve_rest;
  if (opp_rest.none()) {
    if (player == Owner::Eve) return universe;
    return eve_rest;  // empty
  }
  StateSet b = parity_attractor(g, player == Owner::Eve ? Owner::Adam : Owner::Eve, opp_rest,
                                universe);
  StateSet eve_sub = parity_solve(g, universe - b);
  if (player == Owner::Adam) return eve_sub | b;
  return eve_sub;
}

using Lar = std::vector<std::uint8_t>;  // most recent colour first

}  // namespace

StateSet lar_parity_oracle(const Arena& arena, const MullerCondition& condition) {
  if (!(arena.alphabet == condition.alphabet()))
    throw AlphabetMismatch("arena and condition alphabets differ");
  if (!arena.two_player()) throw Unsupported("the LAR oracle handles 2-player arenas only");
  const std::size_t n_colours = arena.alphabet.size();

  // product states (arena state, LAR, hit); built lazily by BFS
  struct Key {
    StateIndex state;
    Lar lar;
    std::uint8_t hit;
    bool operator<(const Key& o) const {
      return std::tie(state, lar, hit) < std::tie(o.state, o.lar, o.hit);
    }
  };
  ParityGame game;
  std::map<Key, StateIndex> ids;
  std::vector<Key> keys;
  std::deque<StateIndex> queue;

  auto priority_of = [&](const Lar& lar, std::uint8_t hit) {
    ColourSet first_h;
    for (std::uint8_t i = 0; i < hit; ++i) first_h.set(lar[i]);
    return 2 * int(hit) + (condition.contains(first_h) ? 0 : 1);
  };

  auto add = [&](Key key) -> StateIndex {
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    StateIndex id = static_cast<StateIndex>(keys.size());
    ids.emplace(key, id);
    keys.push_back(key);
    game.owner.push_back(arena.states[key.state].owner);
    game.priority.push_back(priority_of(key.lar, key.hit));
    game.succ.emplace_back();
    game.pred.emplace_back();
    queue.push_back(id);
    return id;
  };

  Lar initial_lar(n_colours);
  for (std::size_t i = 0; i < n_colours; ++i) initial_lar[i] = static_cast<std::uint8_t>(i);
  std::vector<StateIndex> entry(arena.size());
  for (StateIndex s = 0; s < arena.size(); ++s) entry[s] = add({s, initial_lar, 0});

  while (!queue.empty()) {
    StateIndex id = queue.front();
    queue.pop_front();
    Key key = keys[id];
    for (StateIndex t : arena.succ[key.state]) {
      Lar lar = key.lar;
      std::uint8_t hit = 0;
      if (arena.states[t].colour) {
        auto c = static_cast<std::uint8_t>(*arena.states[t].colour);
        auto pos = std::find(lar.begin(), lar.end(), c);
        hit = static_cast<std::uint8_t>(pos - lar.begin() + 1);
        lar.erase(pos);
        lar.insert(lar.begin(), c);
      }
      StateIndex tid = add({t, lar, hit});
      game.succ[id].push_back(tid);
      game.pred[tid].push_back(id);
    }
  }

  StateSet all(game.size());
  all.set();
  StateSet eve_region = parity_solve(game, all);
  StateSet out(arena.size());
  for (StateIndex s = 0; s < arena.size(); ++s)
    if (eve_region.test(entry[s])) out.set(s);
  return out;
}

}  // namespace muller
