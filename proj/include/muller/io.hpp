#pragma once

#include <json.hpp>
#include <string>

#include "muller/solver.hpp"
#include "muller/verifier.hpp"
#include "muller/witness.hpp"

namespace muller {

using Json = nlohmann::ordered_json;

MullerCondition condition_from_json(const Json& j);
Json condition_to_json(const MullerCondition& condition);

Arena arena_from_json(const Json& j);
Json arena_to_json(const Arena& arena);

StrategyTransducer strategy_from_json(const Json& j, const Arena& arena);
Json strategy_to_json(const StrategyTransducer& strategy, const Arena& arena);

Json tree_to_json(const ZielonkaTree& tree, const ColourAlphabet& alphabet);
Json dag_to_json(const ZielonkaDag& dag, const ColourAlphabet& alphabet);
Json cropped_to_json(const CroppedDag& cropped, const ColourAlphabet& alphabet);
Json witness_map_to_json(const WitnessArena& witness, const ColourAlphabet& alphabet);
Json solve_result_to_json(const SolveResult& result, const Arena& arena);
Json report_to_json(const VerificationReport& report, const Arena& arena);
Json stats_to_json(const SimulationStats& stats, const ColourAlphabet& alphabet);

std::string dot_tree(const ZielonkaTree& tree, const ColourAlphabet& alphabet);
std::string dot_dag(const ZielonkaDag& dag, const ColourAlphabet& alphabet);
std::string dot_cropped(const CroppedDag& cropped, const ColourAlphabet& alphabet);
std::string dot_arena(const Arena& arena);

Json load_json(const std::string& path);
void save_text(const std::string& path, const std::string& text);

}  // namespace muller
