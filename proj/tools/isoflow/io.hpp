#pragma once

// JSON encodings of matrices, tableaux and flow definitions.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "isoflow/flows.hpp"
#include "isoflow/tableaux.hpp"

namespace isoflow::cli {

using Json = nlohmann::ordered_json;

// Rows of [re, im] pairs.
Json matrix_to_json(const Matrix& m);
// Accepts [re, im] pairs or plain reals; `field` names the value in errors.
Matrix matrix_from_json(const Json& j, const std::string& field);

// {"s", "A", "b", "c"} with A as a list of rows.
Json tableau_to_json(const ButcherTableau& t);
ButcherTableau tableau_from_json(const Json& j, const std::string& field);

// {"first": tableau, "second": tableau}.
Json partitioned_to_json(const PartitionedTableau& t);
PartitionedTableau partitioned_from_json(const Json& j, const std::string& field);

Json read_json_file(const std::filesystem::path& path);

// Inline flow definition: {"name", "kind", kind parameters, optional "W0",
// "h", "T"}. Kinds: rigid-body, toda, bloch-iserles, chu, brockett,
// vortices, heisenberg.
FlowPreset flow_from_json(const Json& j, std::uint64_t seed);

// Custom definitions (*.json) found in dir, sorted by file name. A missing
// or empty directory yields none.
std::vector<Json> load_flow_dir(const std::filesystem::path& dir);

}  // namespace isoflow::cli
