#include "muller/io.hpp"

#include <fstream>
#include <sstream>

namespace muller {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

Owner owner_from(const std::string& s) {
  if (s == "eve") return Owner::Eve;
  if (s == "adam") return Owner::Adam;
  if (s == "random") return Owner::Random;
  throw ParseError("unknown owner '" + s + "'");
}

Json colour_set_to_json(ColourSet s, const ColourAlphabet& alphabet) {
  Json out = Json::array();
  for (std::size_t i : s.indices()) out.push_back(alphabet.name(i));
  return out;
}

ColourSet colour_set_from_json(const Json& j, const ColourAlphabet& alphabet) {
  ColourSet out;
  for (const auto& name : j) {
    auto i = alphabet.index(name.get<std::string>());
    if (!i) throw ParseError("unknown colour '" + name.get<std::string>() + "'");
    out.set(*i);
  }
  return out;
}

}  // namespace

MullerCondition condition_from_json(const Json& j) {
  if (!j.contains("colours")) throw ParseError("condition file: missing 'colours'");
  if (!j.contains("winning")) throw ParseError("condition file: missing 'winning'");
  std::vector<std::string> names;
  for (const auto& c : j.at("colours")) names.push_back(c.get<std::string>());
  ColourAlphabet alphabet(std::move(names));
  std::vector<ColourSet> winning;
  bool saw_empty = false;
  for (const auto& set : j.at("winning")) {
    ColourSet s = colour_set_from_json(set, alphabet);
    saw_empty = saw_empty || s.is_empty();
    winning.push_back(s);
  }
  if (j.contains("empty_wins")) {
    bool empty_wins = j.at("empty_wins").get<bool>();
    if (!empty_wins && saw_empty)
      throw ParseError("condition file: empty_wins is false but 'winning' lists the empty set");
    if (empty_wins) winning.push_back(ColourSet::empty());
  }
  return MullerCondition(std::move(alphabet), std::move(winning));
}

Json condition_to_json(const MullerCondition& condition) {
  Json j;
  j["colours"] = condition.alphabet().names();
  Json winning = Json::array();
  for (ColourSet s : condition.winning())
    winning.push_back(colour_set_to_json(s, condition.alphabet()));
  j["winning"] = winning;
  j["empty_wins"] = condition.empty_wins();
  return j;
}

Arena arena_from_json(const Json& j) {
  for (const char* key : {"colours", "states", "edges"})
    if (!j.contains(key)) throw ParseError(std::string("arena file: missing '") + key + "'");
  std::vector<std::string> names;
  for (const auto& c : j.at("colours")) names.push_back(c.get<std::string>());
  ArenaBuilder builder(ColourAlphabet{std::move(names)});
  for (const auto& st : j.at("states")) {
    std::optional<std::string> colour;
    if (st.contains("colour") && !st.at("colour").is_null())
      colour = st.at("colour").get<std::string>();
    builder.state(st.at("id").get<std::string>(), owner_from(st.at("owner").get<std::string>()),
                  colour);
  }
  for (const auto& e : j.at("edges"))
    builder.edge(e.at(0).get<std::string>(), e.at(1).get<std::string>());
  if (j.contains("delta"))
    for (const auto& [from, dist] : j.at("delta").items())
      for (const auto& [to, p] : dist.items())
        builder.prob(from, to, parse_rational(p.get<std::string>()));
  return builder.build();
}

Json arena_to_json(const Arena& arena) {
  Json j;
  j["colours"] = arena.alphabet.names();
  Json states = Json::array();
  for (const auto& st : arena.states) {
    Json s;
    s["id"] = st.name;
    s["owner"] = owner_name(st.owner);
    s["colour"] = st.colour ? Json(arena.alphabet.name(*st.colour)) : Json(nullptr);
    states.push_back(s);
  }
  j["states"] = states;
  Json edges = Json::array();
  for (StateIndex s = 0; s < arena.size(); ++s)
    for (StateIndex t : arena.succ[s])
      edges.push_back(Json::array({arena.states[s].name, arena.states[t].name}));
  j["edges"] = edges;
  Json delta = Json::object();
  for (StateIndex s = 0; s < arena.size(); ++s) {
    if (arena.states[s].owner != Owner::Random) continue;
    Json dist = Json::object();
    for (std::size_t k = 0; k < arena.succ[s].size(); ++k)
      dist[arena.states[arena.succ[s][k]].name] = format_rational(arena.delta[s][k]);
    delta[arena.states[s].name] = dist;
  }
  if (!delta.empty()) j["delta"] = delta;
  return j;
}

StrategyTransducer strategy_from_json(const Json& j, const Arena& arena) {
  StrategyTransducer out;
  out.owner = j.contains("owner") ? owner_from(j.at("owner").get<std::string>()) : Owner::Eve;
  for (const auto& m : j.at("memory")) out.memory.push_back(m.get<std::string>());
  if (out.memory.empty()) throw ParseError("strategy file: empty memory set");
  auto mem_index = [&](const std::string& name) -> MemIndex {
    for (std::size_t i = 0; i < out.memory.size(); ++i)
      if (out.memory[i] == name) return static_cast<MemIndex>(i);
    throw ParseError("strategy file: unknown memory state '" + name + "'");
  };
  out.initial = mem_index(j.at("initial").get<std::string>());
  out.next.assign(arena.size(), std::vector<StrategyTransducer::Dist>(out.memory.size()));
  out.update.assign(arena.size(), std::vector<StrategyTransducer::MemDist>(out.memory.size()));

  auto split_key = [&](const std::string& key) -> std::pair<StateIndex, MemIndex> {
    auto bar = key.rfind('|');
    if (bar == std::string::npos)
      throw ParseError("strategy file: key '" + key + "' is not 'state|memory'");
    auto s = arena.index(key.substr(0, bar));
    if (!s) throw ParseError("strategy file: unknown state in key '" + key + "'");
    return {*s, mem_index(key.substr(bar + 1))};
  };

  if (j.contains("next"))
    for (const auto& [key, dist] : j.at("next").items()) {
      auto [s, m] = split_key(key);
      for (const auto& [to, p] : dist.items()) {
        auto t = arena.index(to);
        if (!t) throw ParseError("strategy file: unknown target '" + to + "'");
        if (!arena.has_edge(s, *t)) throw IllegalMove(arena.states[s].name, to);
        out.next[s][m].push_back({*t, parse_rational(p.get<std::string>())});
      }
      std::sort(out.next[s][m].begin(), out.next[s][m].end());
      Rational sum(0);
      for (const auto& [t, p] : out.next[s][m]) sum += p;
      if (sum != Rational(1))
        throw ParseError("strategy file: next distribution at '" + key + "' sums to " +
                         format_rational(sum));
    }
  if (j.contains("update"))
    for (const auto& [key, dist] : j.at("update").items()) {
      auto [s, m] = split_key(key);
      for (const auto& [to, p] : dist.items())
        out.update[s][m].push_back({mem_index(to), parse_rational(p.get<std::string>())});
      std::sort(out.update[s][m].begin(), out.update[s][m].end());
      Rational sum(0);
      for (const auto& [t, p] : out.update[s][m]) sum += p;
      if (sum != Rational(1))
        throw ParseError("strategy file: update distribution at '" + key + "' sums to " +
                         format_rational(sum));
    }
  return out;
}

Json strategy_to_json(const StrategyTransducer& strategy, const Arena& arena) {
  Json j;
  j["owner"] = owner_name(strategy.owner);
  j["memory"] = strategy.memory;
  j["initial"] = strategy.memory[strategy.initial];
  Json next = Json::object();
  for (StateIndex s = 0; s < arena.size(); ++s)
    for (std::size_t m = 0; m < strategy.memory_size(); ++m) {
      if (strategy.next[s][m].empty()) continue;
      Json dist = Json::object();
      for (const auto& [t, p] : strategy.next[s][m])
        dist[arena.states[t].name] = format_rational(p);
      next[arena.states[s].name + "|" + strategy.memory[m]] = dist;
    }
  j["next"] = next;
  Json update = Json::object();
  for (StateIndex s = 0; s < arena.size(); ++s)
    for (std::size_t m = 0; m < strategy.memory_size(); ++m) {
      const auto& d = strategy.update[s][m];
      if (d.empty()) continue;
      if (d.size() == 1 && d.front().first == m) continue;  // identity, the default
      Json dist = Json::object();
      for (const auto& [t, p] : d) dist[strategy.memory[t]] = format_rational(p);
      update[arena.states[s].name + "|" + strategy.memory[m]] = dist;
    }
  j["update"] = update;
  return j;
}

namespace {

Json tree_node_to_json(const ZielonkaTree& tree, NodeId n, const ColourAlphabet& alphabet) {
  Json j;
  j["label"] = colour_set_to_json(tree.nodes[n].label, alphabet);
  j["owner"] = owner_name(tree.nodes[n].owner);
  Json children = Json::array();
  for (NodeId c : tree.nodes[n].children) children.push_back(tree_node_to_json(tree, c, alphabet));
  j["children"] = children;
  return j;
}

}  // namespace

Json tree_to_json(const ZielonkaTree& tree, const ColourAlphabet& alphabet) {
  return tree_node_to_json(tree, tree.root, alphabet);
}

Json dag_to_json(const ZielonkaDag& dag, const ColourAlphabet& alphabet) {
  Json j;
  Json nodes = Json::array();
  for (const auto& n : dag.nodes) {
    Json node;
    node["label"] = colour_set_to_json(n.label, alphabet);
    node["owner"] = owner_name(n.owner);
    nodes.push_back(node);
  }
  j["nodes"] = nodes;
  Json edges = Json::array();
  for (NodeId n = 0; n < dag.nodes.size(); ++n)
    for (NodeId c : dag.nodes[n].children) edges.push_back(Json::array({n, c}));
  j["edges"] = edges;
  j["root"] = dag.root;
  return j;
}

Json cropped_to_json(const CroppedDag& cropped, const ColourAlphabet& alphabet) {
  Json j;
  Json nodes = Json::array();
  const auto& dag = *cropped.source;
  for (NodeId n = 0; n < dag.nodes.size(); ++n) {
    if (!cropped.in_dag[n]) continue;
    Json node;
    node["id"] = n;
    node["label"] = colour_set_to_json(dag.nodes[n].label, alphabet);
    node["owner"] = owner_name(dag.nodes[n].owner);
    nodes.push_back(node);
  }
  j["nodes"] = nodes;
  Json edges = Json::array();
  for (NodeId n = 0; n < dag.nodes.size(); ++n) {
    if (!cropped.in_dag[n]) continue;
    for (NodeId c : cropped.children(n)) edges.push_back(Json::array({n, c}));
  }
  j["edges"] = edges;
  j["root"] = cropped.root;
  return j;
}

Json witness_map_to_json(const WitnessArena& witness, const ColourAlphabet& alphabet) {
  Json j;
  j["root"] = witness.arena.states[witness.root_state].name;
  j["cropped"] = cropped_to_json(witness.cropped, alphabet);
  Json states = Json::object();
  static const char* role_names[] = {"eve_node",   "pair",      "star_entry",
                                     "star_visit", "star_skip", "star_exit",
                                     "pick_entry", "pick_visit", "pick_exit"};
  for (StateIndex s = 0; s < witness.arena.size(); ++s) {
    const auto& info = witness.info[s];
    Json e;
    e["role"] = role_names[static_cast<int>(info.role)];
    e["node"] = alphabet.set_string(witness.cropped.node(info.node).label);
    if (info.role != WitnessArena::Role::EveNode && !info.leaf_chain)
      e["child"] = alphabet.set_string(witness.cropped.node(info.child).label);
    if (info.colour) e["colour"] = alphabet.name(*info.colour);
    states[witness.arena.states[s].name] = e;
  }
  j["states"] = states;
  return j;
}

namespace {

Json state_set_to_json(const StateSet& set, const Arena& arena) {
  Json out = Json::array();
  for (std::size_t s = set.find_first(); s != StateSet::npos; s = set.find_next(s))
    out.push_back(arena.states[s].name);
  return out;
}

Json trace_to_json(const SolveTrace& trace, const Arena& arena,
                   const ColourAlphabet& alphabet) {
  Json j;
  j["label"] = alphabet.set_string(trace.label);
  j["owner"] = owner_name(trace.owner);
  Json steps = Json::array();
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& step = trace.steps[i];
    Json s;
    s["child"] = alphabet.set_string(step.child_label);
    s["kind"] = step.extraction ? "trap" : "removal";
    s["universe"] = state_set_to_json(step.universe, arena);
    s[step.extraction ? "trap" : "opponent_region"] = state_set_to_json(step.core, arena);
    s["attractor"] = state_set_to_json(step.layer, arena);
    if (trace.children[i]) s["subtree"] = trace_to_json(*trace.children[i], arena, alphabet);
    steps.push_back(s);
  }
  j["steps"] = steps;
  return j;
}

}  // namespace

Json solve_result_to_json(const SolveResult& result, const Arena& arena) {
  Json j;
  j["eve_region"] = state_set_to_json(result.eve_region, arena);
  j["adam_region"] = state_set_to_json(result.adam_region, arena);
  if (result.trace) j["decomposition"] = trace_to_json(*result.trace, arena, arena.alphabet);
  return j;
}

Json stats_to_json(const SimulationStats& stats, const ColourAlphabet& alphabet) {
  Json j;
  j["episodes"] = stats.episodes;
  j["wins"] = stats.wins;
  j["win_rate"] = stats.win_rate();
  j["horizon"] = stats.horizon;
  j["window_warnings"] = stats.window_warnings;
  Json hist = Json::object();
  for (const auto& [mask, count] : stats.inf_colour_sets)
    hist[alphabet.set_string(ColourSet(mask))] = count;
  j["inf_colour_sets"] = hist;
  return j;
}

Json report_to_json(const VerificationReport& report, const Arena& arena) {
  Json j;
  switch (report.verdict) {
    case VerificationReport::Verdict::AlmostSure: j["verdict"] = "AlmostSure"; break;
    case VerificationReport::Verdict::SureWin: j["verdict"] = "SureWin"; break;
    case VerificationReport::Verdict::Refuted: j["verdict"] = "Refuted"; break;
  }
  if (report.counterexample) {
    const auto& cex = *report.counterexample;
    Json c;
    const Arena& prod = cex.product.mdp;
    c["inf_colours"] = colour_set_to_json(cex.inf_colours, arena.alphabet);
    c["start"] = prod.states[cex.start].name;
    c["product_arena"] = arena_to_json(prod);
    if (cex.end_component) {
      c["end_component"] = state_set_to_json(cex.end_component->states, prod);
      Json moves = Json::object();
      for (StateIndex s = 0; s < prod.size(); ++s)
        if (cex.adam_moves[s] >= 0)
          moves[prod.states[s].name] =
              prod.states[static_cast<StateIndex>(cex.adam_moves[s])].name;
      c["adam_moves"] = moves;
      // replayable as a strategy file on the product arena
      std::vector<std::int32_t> table(prod.size(), -1);
      for (StateIndex s = 0; s < prod.size(); ++s)
        if (prod.states[s].owner == Owner::Adam && cex.adam_moves[s] >= 0)
          table[s] = cex.adam_moves[s];
      c["adam_strategy"] = strategy_to_json(pure_memoryless(prod, Owner::Adam, table), prod);
    }
    if (!cex.lasso_cycle.empty()) {
      Json prefix = Json::array(), cycle = Json::array();
      for (StateIndex s : cex.lasso_prefix) prefix.push_back(prod.states[s].name);
      for (StateIndex s : cex.lasso_cycle) cycle.push_back(prod.states[s].name);
      c["lasso"] = Json{{"prefix", prefix}, {"cycle", cycle}};
    }
    j["counterexample"] = c;
  } else {
    j["counterexample"] = nullptr;
  }
  if (report.statistics)
    j["statistics"] = stats_to_json(*report.statistics, arena.alphabet);
  else
    j["statistics"] = nullptr;
  return j;
}

namespace {

void dot_tree_like(std::ostringstream& out, const std::string& name,
                   const std::function<std::size_t()>& count,
                   const std::function<std::string(std::size_t)>& label,
                   const std::function<Owner(std::size_t)>& owner,
                   const std::function<std::vector<NodeId>(std::size_t)>& children,
                   const std::function<bool(std::size_t)>& keep) {
  out << "digraph " << name << " {\n";
  for (std::size_t n = 0; n < count(); ++n) {
    if (!keep(n)) continue;
    out << "  n" << n << " [label=" << quote(label(n))
        << (owner(n) == Owner::Eve ? ", shape=ellipse" : ", shape=box") << "];\n";
  }
  for (std::size_t n = 0; n < count(); ++n) {
    if (!keep(n)) continue;
    for (NodeId c : children(n)) out << "  n" << n << " -> n" << c << ";\n";
  }
  out << "}\n";
}

}  // namespace

std::string dot_tree(const ZielonkaTree& tree, const ColourAlphabet& alphabet) {
  std::ostringstream out;
  dot_tree_like(
      out, "zielonka_tree", [&] { return tree.nodes.size(); },
      [&](std::size_t n) { return alphabet.set_string(tree.nodes[n].label); },
      [&](std::size_t n) { return tree.nodes[n].owner; },
      [&](std::size_t n) { return tree.nodes[n].children; }, [](std::size_t) { return true; });
  return out.str();
}

std::string dot_dag(const ZielonkaDag& dag, const ColourAlphabet& alphabet) {
  std::ostringstream out;
  dot_tree_like(
      out, "zielonka_dag", [&] { return dag.nodes.size(); },
      [&](std::size_t n) { return alphabet.set_string(dag.nodes[n].label); },
      [&](std::size_t n) { return dag.nodes[n].owner; },
      [&](std::size_t n) { return dag.nodes[n].children; }, [](std::size_t) { return true; });
  return out.str();
}

std::string dot_cropped(const CroppedDag& cropped, const ColourAlphabet& alphabet) {
  std::ostringstream out;
  dot_tree_like(
      out, "cropped_dag", [&] { return cropped.source->nodes.size(); },
      [&](std::size_t n) {
        return alphabet.set_string(cropped.source->nodes[n].label);
      },
      [&](std::size_t n) { return cropped.source->nodes[n].owner; },
      [&](std::size_t n) { return cropped.children(static_cast<NodeId>(n)); },
      [&](std::size_t n) { return bool(cropped.in_dag[n]); });
  return out.str();
}

std::string dot_arena(const Arena& arena) {
  std::ostringstream out;
  out << "digraph arena {\n";
  for (StateIndex s = 0; s < arena.size(); ++s) {
    const auto& st = arena.states[s];
    std::string label = st.name;
    if (st.colour) label += "\n" + arena.alphabet.name(*st.colour);
    const char* shape = st.owner == Owner::Eve     ? "ellipse"
                        : st.owner == Owner::Adam ? "box"
                                                  : "triangle";
    out << "  s" << s << " [label=" << quote(label) << ", shape=" << shape << "];\n";
  }
  for (StateIndex s = 0; s < arena.size(); ++s)
    for (std::size_t k = 0; k < arena.succ[s].size(); ++k) {
      out << "  s" << s << " -> s" << arena.succ[s][k];
      if (arena.states[s].owner == Owner::Random)
        out << " [label=" << quote(format_rational(arena.delta[s][k])) << "]";
      out << ";\n";
    }
  out << "}\n";
  return out.str();
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON error in ") + path + ": " + e.what());
  }
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace muller
