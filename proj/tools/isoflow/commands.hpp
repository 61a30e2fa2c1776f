#pragma once

// The isoflow commands. Each returns the process exit status.

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace isoflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitDegenerate = 4;

// Integrates the configured experiment and writes <out>/trajectory.csv,
// <out>/monitor_<group>.csv and <out>/manifest.json.
int run_command(const ExperimentConfig& config, bool json, std::ostream& out,
                std::ostream& err);

// Convergence study; writes <out>/convergence.csv, <out>/convergence.json
// and <out>/manifest.json.
int converge_command(const ExperimentConfig& config, bool json, std::ostream& out,
                     std::ostream& err);

int list_flows_command(const std::string& flow_dir, bool json, std::ostream& out,
                       std::ostream& err);

// The scheme described by the config, resolved against the flow.
Scheme make_scheme(const ExperimentConfig& config, const FlowPreset& preset);

}  // namespace isoflow::cli
