#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <ostream>

#include "isoflow/diagnostics.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/version.hpp"

namespace isoflow::cli {

namespace fs = std::filesystem;

namespace {

// Maps library exceptions to exit statuses.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const DegenerateFitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const SingularityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const ConfigurationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::size_t step_count(double t_final, double h) {
  const double ratio = t_final / h;
  const double n = std::round(ratio);
  if (n < 1.0) throw ConfigurationError("config: field 'T' must be at least 'h'");
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
    throw ConfigurationError("config: field 'T' must be a multiple of 'h'");
  return static_cast<std::size_t>(n);
}

// Resolved copy of the config: defaults filled in and custom flows inlined, so
// that the manifest reproduces the run on its own.
ExperimentConfig resolved(const ExperimentConfig& c, const FlowPreset& p, double t_default) {
  ExperimentConfig r = c;
  if (r.flow.is_string()) {
    for (const auto& def : load_flow_dir(c.flow_dir))
      if (def.at("name") == r.flow) r.flow = def;
  }
  r.flow_dir.clear();
  if (!r.h) r.h = p.h;
  if (!r.t_final) r.t_final = t_default;
  if (!r.monitors) {
    std::vector<std::string> m = {kMonitorCasimir, kMonitorSubspace, kMonitorIterations};
    const ProductFlowDefinition sys = p.system();
    if (sys.has_hamiltonian()) m.emplace_back(kMonitorHamiltonian);
    if (sys.has_momentum()) m.emplace_back(kMonitorMomentum);
    r.monitors = m;
  }
  return r;
}

Json manifest(const std::string& command, const ExperimentConfig& c) {
  Json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["config"] = config_to_json(c);
  return j;
}

void write_json(const fs::path& path, const Json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

}  // namespace

Scheme make_scheme(const ExperimentConfig& c, const FlowPreset& preset) {
  const std::string& v = c.variant;
  if (v != "auto" && v != "general" && v != "jquad" && v != "complement")
    throw ConfigurationError("config: field 'variant' must be auto, general, jquad or complement");
  if (c.partitioned) {
    if (c.tableau) throw ConfigurationError("config: give either 'tableau' or 'partitioned'");
    if (v != "auto" && v != "general")
      throw ConfigurationError("config: partitioned schemes use the general variant");
    return Scheme::isosyprk(*c.partitioned);
  }
  const ButcherTableau t = c.tableau ? *c.tableau : tableau_for_order(c.order);
  if (v == "auto") return Scheme::isosyrk(t);
  if (v == "general") return Scheme::isosyrk(t, SchemeVariant::general());

  const bool complement = v == "complement";
  const ProductFlowDefinition sys = preset.system();
  std::optional<SchemeVariant> variant;
  for (const auto& comp : sys.components) {
    const auto q = comp.subspace.quadratic_constraint(comp.dimension);
    if (!q || q->complement != complement)
      throw ConfigurationError("config: variant '" + v + "' needs a " +
                               (complement ? "complement" : "J-quadratic") + " subspace, flow '" +
                               sys.name + "' lives on " + comp.subspace.describe());
    if (!variant)
      variant = complement ? SchemeVariant::complement(q->j) : SchemeVariant::j_quadratic(q->j);
  }
  return Scheme::isosyrk(t, variant);
}

int run_command(const ExperimentConfig& config, bool json, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&]() -> int {
    const FlowPreset preset = resolve_flow(config);
    const ExperimentConfig cfg = resolved(config, preset, preset.t_final);
    const Scheme scheme = make_scheme(cfg, preset);
    const ProductFlowDefinition sys = preset.system();

    IntegrationOptions opt;
    opt.nsteps = step_count(*cfg.t_final, *cfg.h);
    opt.stride = cfg.stride;
    opt.monitors = *cfg.monitors;
    opt.solver = cfg.solver;

    const fs::path dir = cfg.out;
    Json man = manifest("run", cfg);
    man["scheme"] = {{"tableau", partitioned_to_json(scheme.tableau)},
                     {"partitioned", scheme.partitioned},
                     {"variant", scheme.variant ? scheme.variant->describe() : "auto"}};

    TrajectoryRecord tr;
    try {
      tr = integrate(sys, scheme, preset.initial, *cfg.h, opt);
    } catch (const ConvergenceError& e) {
      man["status"] = {{"complete", false}, {"steps", 0}, {"failure", e.what()}};
      write_json(dir / "manifest.json", man);
      throw;
    } catch (const SingularityError& e) {
      man["status"] = {{"complete", false}, {"steps", 0}, {"failure", e.what()}};
      write_json(dir / "manifest.json", man);
      throw;
    }

    Json outputs = Json::array();
    write_states_csv(dir / "trajectory.csv", tr);
    outputs.push_back("trajectory.csv");
    for (const auto& p : write_monitor_csvs(dir, tr)) outputs.push_back(p.filename().string());
    outputs.push_back("manifest.json");

    const std::size_t steps = tr.complete ? opt.nsteps : *tr.failed_step;
    man["status"] = {{"complete", tr.complete}, {"steps", steps}, {"warnings", tr.warnings}};
    if (!tr.complete) man["status"]["failure"] = tr.failure;
    man["outputs"] = outputs;
    write_json(dir / "manifest.json", man);

    for (const auto& w : tr.warnings) err << "warning: " << w << '\n';
    if (json) {
      out << man.dump(2) << '\n';
    } else {
      const auto drift = casimir_drift(tr, opt.pmax);
      out << preset.name << ": " << steps << " steps of h=" << *cfg.h
          << ", casimir drift " << sci(max_abs_value(drift));
      if (sys.has_hamiltonian())
        out << ", hamiltonian drift " << sci(hamiltonian_drift(tr, sys).max_abs);
      out << "\nwrote " << dir.string() << '\n';
    }
    if (!tr.complete) {
      err << "error: " << tr.failure << " (partial output written)\n";
      return kExitSolver;
    }
    return kExitOk;
  });
}

int converge_command(const ExperimentConfig& config, bool json, std::ostream& out,
                     std::ostream& err) {
  return guarded(err, [&]() -> int {
    const FlowPreset preset = resolve_flow(config);
    ExperimentConfig cfg = resolved(config, preset, 1.0);
    if (cfg.hs.empty()) cfg.hs = halving_steps(4, 10);
    if (cfg.orders.empty()) throw ConfigurationError("config: field 'orders' is empty");
    for (double h : cfg.hs) step_count(*cfg.t_final, h);

    ConvergenceOptions opt;
    opt.orders = cfg.orders;
    opt.hs = cfg.hs;
    opt.t_final = *cfg.t_final;
    opt.solver = cfg.solver;
    opt.reference.solver = cfg.solver;
    opt.reference.cache_dir = fs::path(cfg.out) / "cache";
    opt.throw_on_degenerate = false;
    if (cfg.hs.size() < 2)
      throw DegenerateFitError("convergence study: a slope needs at least two step sizes");

    const ConvergenceReport report = convergence_study(preset.system(), preset.initial, opt);

    const fs::path dir = cfg.out;
    write_convergence_csv(dir / "convergence.csv", report);
    Json summary;
    summary["flow"] = report.flow;
    summary["T"] = report.t_final;
    summary["h_ref"] = report.h_ref;
    summary["reference_consistency"] = report.reference_consistency;
    summary["floor"] = report.floor;
    summary["series"] = Json::array();
    for (const auto& s : report.series) {
      Json js;
      js["order"] = s.order;
      js["slope"] = s.degenerate ? Json(nullptr) : Json(s.slope);
      js["points_used"] = s.points_used;
      js["degenerate"] = s.degenerate;
      js["hs"] = s.hs;
      js["errors"] = s.errors;
      summary["series"].push_back(std::move(js));
    }
    write_json(dir / "convergence.json", summary);
    Json man = manifest("converge", cfg);
    man["status"] = {{"degenerate", report.degenerate()}};
    man["outputs"] = {"convergence.csv", "convergence.json", "manifest.json"};
    write_json(dir / "manifest.json", man);

    if (json) {
      out << summary.dump(2) << '\n';
    } else {
      out << report.flow << ": T=" << format_double(report.t_final)
          << ", reference h=" << format_double(report.h_ref) << " (self-consistency "
          << sci(report.reference_consistency) << ")\n";
      for (const auto& s : report.series) {
        char buf[160];
        if (s.degenerate) {
          std::snprintf(buf, sizeof buf, "order %zu  no slope: fewer than 2 errors above %.1e\n",
                        s.order, report.floor);
        } else {
          std::snprintf(buf, sizeof buf, "order %zu  slope %.3f  (%zu points)\n", s.order,
                        s.slope, s.points_used);
        }
        out << buf;
      }
      out << "wrote " << dir.string() << '\n';
    }
    if (report.degenerate()) {
      err << "error: degenerate convergence fit (errors at the round-off floor); use larger h "
             "or T\n";
      return kExitDegenerate;
    }
    return kExitOk;
  });
}

int list_flows_command(const std::string& flow_dir, bool json, std::ostream& out,
                       std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto flows = list_flows(flow_dir);
    if (json) {
      Json arr = Json::array();
      for (const auto& f : flows)
        arr.push_back({{"name", f.name},
                       {"dimension", f.dimension},
                       {"subspace", f.subspace},
                       {"hamiltonian", f.hamiltonian},
                       {"custom", f.custom}});
      out << arr.dump(2) << '\n';
      return kExitOk;
    }
    for (const auto& f : flows) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%-18s n=%-3zu %-40s hamiltonian=%s%s\n", f.name.c_str(),
                    f.dimension, f.subspace.c_str(), f.hamiltonian ? "yes" : "no",
                    f.custom ? "  (custom)" : "");
      out << buf;
    }
    return kExitOk;
  });
}

}  // namespace isoflow::cli
