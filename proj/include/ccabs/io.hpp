#pragma once

#include <string>

#include "json.hpp"

#include "ccabs/abstraction.hpp"
#include "ccabs/data.hpp"
#include "ccabs/scm.hpp"

namespace ccabs::io {

using json = nlohmann::ordered_json;

// All loaders reject unknown keys, missing keys, and type mismatches with a
// StructuralError naming the offending location. Serializers emit exactly
// the accepted schema, so load(save(x)) == x.

json parse_json(const std::string& text, const std::string& where);
json load_json_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

FiniteScm scm_from_json(const json& j);
json scm_to_json(const FiniteScm& scm);
FiniteScm load_scm(const std::string& path);

// Interventions appear in files as {"A": 0, "B": 1} objects; tuples of
// endogenous/exogenous values as arrays in declared variable order.
Intervention intervention_from_json(const json& j, const std::string& where);
json intervention_to_json(const Intervention& i);

// Maps are given extensionally; every low state, point, and admissible
// intervention must appear exactly once, and every image must exist on the
// high side.
TauAbstraction abstraction_from_json(const json& j, const ScmPair& pair);
json abstraction_to_json(const TauAbstraction& abs, const ScmPair& pair);
TauAbstraction load_abstraction(const std::string& path, const ScmPair& pair);

json report_to_json(const VerificationReport& report, const ScmPair& pair);
std::string report_to_text(const VerificationReport& report, const ScmPair& pair);

// Comma-separated values with a header row; entries are small integers.
DataTable table_from_csv(const std::string& text, const std::string& where);
std::string table_to_csv(const DataTable& table);
DataTable load_csv(const std::string& path);

CausalGraph graph_from_json(const json& j);
json graph_to_json(const CausalGraph& graph);
CausalGraph load_graph(const std::string& path);

}  // namespace ccabs::io
