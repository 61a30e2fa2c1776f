#pragma once

// Experiment configuration shared by the run and converge commands.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "io.hpp"
#include "isoflow/integrators.hpp"

namespace isoflow::cli {

struct ExperimentConfig {
  Json flow = "rigid-body-10";  // preset name or inline definition
  std::uint64_t seed = kDefaultSeed;
  std::string flow_dir;

  std::size_t order = 2;
  std::optional<ButcherTableau> tableau;
  std::optional<PartitionedTableau> partitioned;
  std::string variant = "auto";  // auto | general | jquad | complement

  std::optional<double> h;  // defaults from the preset
  std::optional<double> t_final;
  std::size_t stride = 1;
  SolverConfig solver;
  std::optional<std::vector<std::string>> monitors;
  std::string out = "isoflow-out";

  // converge only
  std::vector<std::size_t> orders = {2, 4, 6};
  std::vector<double> hs;  // empty: 0.5^4 .. 0.5^10
};

// Accepts a bare config or a manifest (its "config" member). Unknown keys and
// ill-typed values throw ConfigurationError naming the field.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& c);

std::string solver_name(SolverMethod m);
SolverMethod parse_solver(const std::string& s);

// The flow preset named or defined by the config: built-ins first, then
// definitions in flow_dir.
FlowPreset resolve_flow(const ExperimentConfig& c);

// Built-in preset names plus custom names from flow_dir.
struct FlowListing {
  std::string name;
  std::size_t dimension = 0;
  std::string subspace;
  bool hamiltonian = false;
  bool custom = false;
};
std::vector<FlowListing> list_flows(const std::string& flow_dir);

}  // namespace isoflow::cli
