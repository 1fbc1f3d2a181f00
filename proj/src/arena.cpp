#include "muller/arena.hpp"

#include <algorithm>
#include <map>

namespace muller {

std::optional<StateIndex> Arena::index(const std::string& name) const {
  for (StateIndex i = 0; i < states.size(); ++i)
    if (states[i].name == name) return i;
  return std::nullopt;
}

bool Arena::has_edge(StateIndex s, StateIndex t) const {
  return std::binary_search(succ[s].begin(), succ[s].end(), t);
}

bool Arena::two_player() const {
  for (const auto& s : states)
    if (s.owner == Owner::Random) return false;
  return true;
}

ColourSet Arena::colours_of(const StateSet& set) const {
  ColourSet out;
  for (std::size_t s = set.find_first(); s != StateSet::npos; s = set.find_next(s))
    if (states[s].colour) out.set(*states[s].colour);
  return out;
}

StateSet Arena::states_coloured_in(ColourSet colours) const {
  StateSet out(size());
  for (StateIndex s = 0; s < size(); ++s)
    if (states[s].colour && colours.test(*states[s].colour)) out.set(s);
  return out;
}

ArenaBuilder& ArenaBuilder::state(const std::string& name, Owner owner,
                                  const std::optional<std::string>& colour) {
  if (arena_.index(name)) throw ParseError("duplicate state '" + name + "'");
  std::optional<std::size_t> ci;
  if (colour) {
    ci = arena_.alphabet.index(*colour);
    if (!ci) throw ParseError("state '" + name + "': unknown colour '" + *colour + "'");
  }
  arena_.states.push_back({name, owner, ci});
  arena_.succ.emplace_back();
  arena_.pred.emplace_back();
  arena_.delta.emplace_back();
  return *this;
}

namespace {
StateIndex need_state(const Arena& a, const std::string& name) {
  auto i = a.index(name);
  if (!i) throw ParseError("unknown state '" + name + "'");
  return *i;
}
}  // namespace

ArenaBuilder& ArenaBuilder::edge(const std::string& from, const std::string& to) {
  StateIndex f = need_state(arena_, from), t = need_state(arena_, to);
  arena_.succ[f].push_back(t);
  return *this;
}

ArenaBuilder& ArenaBuilder::prob(const std::string& from, const std::string& to,
                                 const Rational& p) {
  StateIndex f = need_state(arena_, from), t = need_state(arena_, to);
  probs_.push_back({f, {t, p}});
  return *this;
}

ArenaBuilder& ArenaBuilder::uniform_delta() {
  for (StateIndex s = 0; s < arena_.size(); ++s) {
    if (arena_.states[s].owner != Owner::Random) continue;
    bool has = std::any_of(probs_.begin(), probs_.end(),
                           [&](const auto& pr) { return pr.first == s; });
    if (has || arena_.succ[s].empty()) continue;
    auto targets = arena_.succ[s];
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    Rational p(1, static_cast<std::int64_t>(targets.size()));
    for (StateIndex t : targets) probs_.push_back({s, {t, p}});
  }
  return *this;
}

Arena ArenaBuilder::build(bool run_validate) {
  for (auto& list : arena_.succ) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  for (StateIndex s = 0; s < arena_.size(); ++s)
    for (StateIndex t : arena_.succ[s]) arena_.pred[t].push_back(s);
  for (auto& list : arena_.pred) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  for (StateIndex s = 0; s < arena_.size(); ++s)
    if (arena_.states[s].owner == Owner::Random)
      arena_.delta[s].assign(arena_.succ[s].size(), Rational(0));
  for (const auto& [f, tp] : probs_) {
    if (arena_.states[f].owner != Owner::Random)
      throw ParseError("probability on non-random state '" + arena_.states[f].name + "'");
    auto it = std::lower_bound(arena_.succ[f].begin(), arena_.succ[f].end(), tp.first);
    if (it == arena_.succ[f].end() || *it != tp.first)
      throw ParseError("probability on missing edge from '" + arena_.states[f].name + "'");
    arena_.delta[f][static_cast<std::size_t>(it - arena_.succ[f].begin())] += tp.second;
  }
  if (run_validate) {
    auto violations = validate(arena_);
    if (!violations.empty()) {
      std::string msg = "invalid arena:";
      for (const auto& v : violations) msg += "\n  [" + v.state + "] " + v.message;
      throw ParseError(msg);
    }
  }
  return std::move(arena_);
}

std::vector<Violation> validate(const Arena& arena) {
  std::vector<Violation> out;
  for (StateIndex s = 0; s < arena.size(); ++s) {
    const auto& st = arena.states[s];
    if (arena.succ[s].empty())
      out.push_back({st.name, "state has no outgoing edge (plays must be infinite)"});
    if (st.owner == Owner::Random) {
      if (arena.delta[s].size() != arena.succ[s].size()) {
        out.push_back({st.name, "random state is missing its distribution"});
        continue;
      }
      Rational sum(0);
      for (std::size_t k = 0; k < arena.succ[s].size(); ++k) {
        const Rational& p = arena.delta[s][k];
        if (p <= Rational(0))
          out.push_back({st.name, "probability to '" + arena.states[arena.succ[s][k]].name +
                                      "' must be positive (support must equal the edge set)"});
        sum += p;
      }
      if (sum != Rational(1))
        out.push_back({st.name, "distribution sums to " + format_rational(sum) + ", not 1"});
    } else if (!arena.delta[s].empty()) {
      out.push_back({st.name, "non-random state carries a distribution"});
    }
    if (st.colour && *st.colour >= arena.alphabet.size())
      out.push_back({st.name, "colour index out of range"});
  }
  return out;
}

SubArena subarena(const Arena& arena, const StateSet& states) {
  for (std::size_t s = states.find_first(); s != StateSet::npos; s = states.find_next(s)) {
    const auto& st = arena.states[s];
    if (st.owner == Owner::Random) {
      for (StateIndex t : arena.succ[s])
        if (!states.test(t))
          throw SubarenaError(SubarenaError::Kind::NotClosed, st.name);
    } else {
      bool live = false;
      for (StateIndex t : arena.succ[s])
        if (states.test(t)) {
          live = true;
          break;
        }
      if (!live) throw SubarenaError(SubarenaError::Kind::NotLive, st.name);
    }
  }
  return SubArena{&arena, states};
}

AttractorResult attractor(const Arena& arena, Owner player, const StateSet& target) {
  return attractor(arena, player, target, arena.all_states());
}

AttractorResult attractor(const Arena& arena, Owner player, const StateSet& target,
                          const StateSet& universe) {
  AttractorResult res;
  res.region = target & universe;
  res.strategy.assign(arena.size(), -1);
  res.rank.assign(arena.size(), -1);
  for (std::size_t s = res.region.find_first(); s != StateSet::npos;
       s = res.region.find_next(s))
    res.rank[s] = 0;

  // level-synchronous rounds, matching the inductive definition
  for (std::int32_t level = 1;; ++level) {
    StateSet added(arena.size());
    for (std::size_t s = universe.find_first(); s != StateSet::npos;
         s = universe.find_next(s)) {
      if (res.region.test(s)) continue;
      const auto& st = arena.states[s];
      if (st.owner == player || st.owner == Owner::Random) {
        for (StateIndex t : arena.succ[s]) {
          if (!universe.test(t) || !res.region.test(t)) continue;
          added.set(s);
          if (st.owner == player) res.strategy[s] = static_cast<std::int32_t>(t);
          break;
        }
      } else {
        bool all_in = true, any = false;
        for (StateIndex t : arena.succ[s]) {
          if (!universe.test(t)) continue;
          any = true;
          if (!res.region.test(t)) {
            all_in = false;
            break;
          }
        }
        if (any && all_in) added.set(s);
      }
    }
    if (added.none()) break;
    res.region |= added;
    for (std::size_t s = added.find_first(); s != StateSet::npos; s = added.find_next(s))
      res.rank[s] = level;
  }
  return res;
}

bool is_trap(const Arena& arena, Owner player, const StateSet& set) {
  return is_trap(arena, player, set, arena.all_states());
}

bool is_trap(const Arena& arena, Owner player, const StateSet& set, const StateSet& universe) {
  for (std::size_t s = set.find_first(); s != StateSet::npos; s = set.find_next(s)) {
    if (!universe.test(s)) return false;
    const auto& st = arena.states[s];
    if (st.owner == player || st.owner == Owner::Random) {
      for (StateIndex t : arena.succ[s])
        if (universe.test(t) && !set.test(t)) return false;
    } else {
      bool any = false;
      for (StateIndex t : arena.succ[s])
        if (set.test(t)) {
          any = true;
          break;
        }
      if (!any) return false;
    }
  }
  return true;
}

}  // namespace muller
