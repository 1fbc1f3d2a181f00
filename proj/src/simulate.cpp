#include <random>

#include "muller/verifier.hpp"

namespace muller {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step over seed ^ golden-ratio-scaled index
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double next_unit(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
std::size_t sample(const std::vector<std::pair<T, Rational>>& dist, std::mt19937_64& rng) {
  double u = next_unit(rng);
  double acc = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += boost::rational_cast<double>(dist[i].second);
    if (u < acc) return i;
  }
  return dist.size() - 1;
}

}  // namespace

SimulationStats simulate(const Arena& arena, const MullerCondition& condition,
                         const StrategyTransducer* eve, const StrategyTransducer* adam,
                         std::uint64_t episodes, std::uint64_t horizon, std::uint64_t seed,
                         StateIndex from) {
  if (!(arena.alphabet == condition.alphabet()))
    throw AlphabetMismatch("arena and condition alphabets differ");
  SimulationStats stats;
  stats.horizon = horizon;
  if (episodes == 0 || horizon == 0) return stats;

  std::vector<StateIndex> visits;
  visits.reserve(horizon + 1);
  for (std::uint64_t ep = 0; ep < episodes; ++ep) {
    std::mt19937_64 rng(mix_seed(seed, ep));
    StateIndex s = from;
    MemIndex me = eve ? eve->initial : 0;
    MemIndex ma = adam ? adam->initial : 0;
    visits.clear();
    visits.push_back(s);
    for (std::uint64_t step = 0; step < horizon; ++step) {
      const auto& st = arena.states[s];
      StateIndex t;
      if (st.owner == Owner::Random) {
        std::vector<std::pair<StateIndex, Rational>> dist;
        for (std::size_t k = 0; k < arena.succ[s].size(); ++k)
          dist.push_back({arena.succ[s][k], arena.delta[s][k]});
        t = dist[sample(dist, rng)].first;
      } else {
        const StrategyTransducer* strat = st.owner == Owner::Eve ? eve : adam;
        MemIndex m = st.owner == Owner::Eve ? me : ma;
        if (strat && strat->defined(s, m)) {
          const auto& d = strat->next[s][m];
          t = d[sample(d, rng)].first;
        } else {
          const auto& options = arena.succ[s];
          t = options[static_cast<std::size_t>(next_unit(rng) * double(options.size()))];
        }
      }
      if (eve) {
        auto d = eve->update_dist(t, me);
        me = d[sample(d, rng)].first;
      }
      if (adam) {
        auto d = adam->update_dist(t, ma);
        ma = d[sample(d, rng)].first;
      }
      s = t;
      visits.push_back(s);
    }
    // Inf estimate: states seen in the final half of the horizon
    std::size_t begin = visits.size() - (horizon + 1) / 2;
    StateSet window(arena.size());
    for (std::size_t i = begin; i < visits.size(); ++i) window.set(visits[i]);
    bool closed = true;
    for (std::size_t v = window.find_first(); v != StateSet::npos && closed;
         v = window.find_next(v)) {
      bool has_inside = false;
      for (StateIndex t : arena.succ[v])
        if (window.test(t)) {
          has_inside = true;
          break;
        }
      if (!has_inside) closed = false;
    }
    if (!closed) ++stats.window_warnings;
    ColourSet inf = arena.colours_of(window);
    ++stats.inf_colour_sets[inf.bits()];
    if (condition.contains(inf)) ++stats.wins;
    ++stats.episodes;
  }
  return stats;
}

}  // namespace muller
