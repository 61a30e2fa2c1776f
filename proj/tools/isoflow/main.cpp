#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "commands.hpp"
#include "isoflow/diagnostics.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/version.hpp"

namespace {

using namespace isoflow;
using namespace isoflow::cli;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> flow;
  std::optional<std::string> flow_dir;
  std::vector<std::size_t> orders;
  std::optional<std::string> tableau;
  std::optional<std::string> partitioned;
  std::optional<std::string> variant;
  std::vector<double> h;
  std::vector<int> h_range;
  std::optional<double> t_final;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::optional<std::string> solver;
  std::vector<std::string> monitors;
  std::optional<std::size_t> stride;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

void add_common(CLI::App* app, Flags& f, bool converge) {
  app->add_option("--config", f.config, "JSON config or manifest to start from");
  app->add_option("--flow", f.flow, "Preset name or custom flow name");
  app->add_option("--flow-dir", f.flow_dir, "Directory of custom flow definitions");
  app->add_option("--order", f.orders, converge ? "Orders to study (2, 4, 6)" : "2, 4 or 6")
      ->delimiter(',');
  app->add_option("--h", f.h, converge ? "Step sizes" : "Step size")->delimiter(',');
  app->add_option("--T", f.t_final, "Final time");
  app->add_option("--tol", f.tol, "Absolute stage-solver tolerance");
  app->add_option("--max-iter", f.max_iter, "Stage-solver iteration cap");
  app->add_option("--solver", f.solver, "fixed-point or newton");
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--seed", f.seed, "Seed for randomized initial data");
  app->add_flag("--json", f.json, "Machine-readable output");
  if (converge) {
    app->add_option("--h-range", f.h_range, "Exponents FIRST LAST: h = 0.5^FIRST .. 0.5^LAST")
        ->expected(2);
  } else {
    app->add_option("--tableau", f.tableau, "Butcher tableau JSON file");
    app->add_option("--partitioned", f.partitioned, "Partitioned tableau pair JSON file");
    app->add_option("--variant", f.variant, "auto, general, jquad or complement");
    app->add_option("--monitors", f.monitors, "Monitor groups")->delimiter(',');
    app->add_option("--stride", f.stride, "Record every stride-th step");
  }
}

ExperimentConfig build_config(const Flags& f, bool converge) {
  ExperimentConfig c;
  if (f.config) c = config_from_json(read_json_file(*f.config));
  if (f.flow) c.flow = *f.flow;
  if (f.flow_dir) c.flow_dir = *f.flow_dir;
  if (f.seed) c.seed = *f.seed;
  if (converge) {
    if (!f.orders.empty()) c.orders = f.orders;
    if (!f.h.empty()) c.hs = f.h;
    if (!f.h_range.empty()) c.hs = halving_steps(f.h_range[0], f.h_range[1]);
  } else {
    if (f.orders.size() > 1) throw ConfigurationError("config: field 'order' takes one value");
    if (!f.orders.empty()) {
      c.order = f.orders[0];
      c.tableau.reset();
      c.partitioned.reset();
    }
    if (f.h.size() > 1) throw ConfigurationError("config: field 'h' takes one value");
    if (!f.h.empty()) c.h = f.h[0];
    if (f.tableau) {
      c.tableau = tableau_from_json(read_json_file(*f.tableau), "tableau");
      c.partitioned.reset();
    }
    if (f.partitioned) {
      c.partitioned = partitioned_from_json(read_json_file(*f.partitioned), "partitioned");
      c.tableau.reset();
    }
    if (f.variant) c.variant = *f.variant;
    if (!f.monitors.empty()) c.monitors = f.monitors;
    if (f.stride) c.stride = *f.stride;
  }
  if (f.t_final) c.t_final = *f.t_final;
  if (f.tol) c.solver.abs_tol = *f.tol;
  if (f.max_iter) c.solver.max_iter = *f.max_iter;
  if (f.solver) c.solver.method = parse_solver(*f.solver);
  if (f.out) c.out = *f.out;

  if (c.h && !(*c.h > 0.0)) throw ConfigurationError("config: field 'h' must be positive");
  for (double h : c.hs)
    if (!(h > 0.0)) throw ConfigurationError("config: field 'h' must be positive");
  if (c.t_final && !(*c.t_final > 0.0))
    throw ConfigurationError("config: field 'T' must be positive");
  if (!(c.solver.abs_tol > 0.0)) throw ConfigurationError("config: field 'tol' must be positive");
  if (c.solver.max_iter < 1) throw ConfigurationError("config: field 'max-iter' must be >= 1");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isospectral symplectic Runge-Kutta integrators"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Flags run_flags, conv_flags;
  bool list_json = false;
  std::string list_dir;

  CLI::App* run = app.add_subcommand("run", "Integrate a flow and write trajectory and monitors");
  add_common(run, run_flags, false);
  CLI::App* conv = app.add_subcommand("converge", "Global-error convergence study");
  add_common(conv, conv_flags, true);
  CLI::App* list = app.add_subcommand("list-flows", "List flow presets");
  list->add_flag("--json", list_json, "Machine-readable output");
  list->add_option("--flow-dir", list_dir, "Directory of custom flow definitions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return run_command(build_config(run_flags, false), run_flags.json, std::cout,
                                 std::cerr);
    if (*conv) return converge_command(build_config(conv_flags, true), conv_flags.json,
                                       std::cout, std::cerr);
    return list_flows_command(list_dir, list_json, std::cout, std::cerr);
  } catch (const isoflow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
