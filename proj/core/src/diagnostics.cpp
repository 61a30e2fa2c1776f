#include "isoflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>

#include "isoflow/errors.hpp"
#include "isoflow/flows.hpp"

namespace isoflow {

std::vector<std::vector<double>> casimir_drift_by_component(const TrajectoryRecord& tr,
                                                            std::size_t pmax) {
  if (tr.states.empty()) return {};
  const auto& first = tr.states.front();
  std::vector<std::vector<Complex>> base;
  for (const auto& w : first) base.push_back(trace_powers(w, pmax));
  std::vector<std::vector<double>> out(first.size());
  for (const auto& state : tr.states) {
    for (std::size_t c = 0; c < state.size(); ++c) {
      const auto tp = trace_powers(state[c], pmax);
      double d = 0.0;
      for (std::size_t p = 0; p < pmax; ++p) d = std::max(d, std::abs(tp[p] - base[c][p]));
      out[c].push_back(d);
    }
  }
  return out;
}

std::vector<double> casimir_drift(const TrajectoryRecord& tr, std::size_t pmax) {
  const auto per = casimir_drift_by_component(tr, pmax);
  std::vector<double> out(tr.states.size(), 0.0);
  for (const auto& series : per)
    for (std::size_t k = 0; k < series.size(); ++k) out[k] = std::max(out[k], series[k]);
  return out;
}

std::vector<double> eigenvalue_drift(const TrajectoryRecord& tr) {
  if (tr.states.empty()) return {};
  std::vector<std::vector<Complex>> base;
  for (const auto& w : tr.states.front()) base.push_back(eigenvalues(w));
  std::vector<double> out;
  for (const auto& state : tr.states) {
    double d = 0.0;
    for (std::size_t c = 0; c < state.size(); ++c) {
      const auto ev = eigenvalues(state[c]);
      for (std::size_t i = 0; i < ev.size(); ++i) d = std::max(d, std::abs(ev[i] - base[c][i]));
    }
    out.push_back(d);
  }
  return out;
}

double linear_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

double max_abs_value(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double peak_to_peak(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

HamiltonianDrift hamiltonian_drift(const TrajectoryRecord& tr,
                                   const ProductFlowDefinition& flow) {
  if (!flow.has_hamiltonian()) {
    throw ConfigurationError("hamiltonian_drift: flow '" + flow.name + "' has no Hamiltonian");
  }
  HamiltonianDrift d;
  if (tr.states.empty()) return d;
  const double h0 = flow.evaluate_hamiltonian(tr.states.front());
  for (const auto& s : tr.states) d.drift.push_back(flow.evaluate_hamiltonian(s) - h0);
  d.max_abs = max_abs_value(d.drift);
  d.slope = linear_slope(tr.times, d.drift);
  return d;
}

HamiltonianDrift hamiltonian_drift(const TrajectoryRecord& tr, const FlowDefinition& flow) {
  return hamiltonian_drift(tr, as_product(flow));
}

namespace {

Matrix momentum_of(std::span<const Matrix> w, std::span<const double> gamma) {
  Matrix m(w[0].rows(), w[0].cols());
  for (std::size_t i = 0; i < w.size(); ++i) m.add_scaled(gamma[i], w[i]);
  return m;
}

void check_momentum_input(const TrajectoryRecord& tr, std::span<const double> gamma) {
  if (tr.states.empty()) return;
  if (tr.states.front().size() < 2 && gamma.size() != 1) {
    throw ConfigurationError("momentum_drift: trajectory is not a product state");
  }
  if (gamma.size() != tr.states.front().size()) {
    throw ConfigurationError("momentum_drift: expected " +
                             std::to_string(tr.states.front().size()) + " strengths, got " +
                             std::to_string(gamma.size()));
  }
}

}  // namespace

std::vector<double> momentum_drift(const TrajectoryRecord& tr,
                                   std::span<const double> gamma) {
  check_momentum_input(tr, gamma);
  std::vector<double> out;
  if (tr.states.empty()) return out;
  const Matrix m0 = momentum_of(tr.states.front(), gamma);
  for (const auto& s : tr.states) out.push_back(frobenius_norm(momentum_of(s, gamma) - m0));
  return out;
}

std::array<std::vector<double>, 3> momentum_vector_drift(const TrajectoryRecord& tr,
                                                         std::span<const double> gamma) {
  check_momentum_input(tr, gamma);
  std::array<std::vector<double>, 3> out;
  if (tr.states.empty()) return out;
  const auto x0 = su2_to_vector(momentum_of(tr.states.front(), gamma));
  for (const auto& s : tr.states) {
    const auto x = su2_to_vector(momentum_of(s, gamma));
    for (int k = 0; k < 3; ++k) out[k].push_back(std::abs(x[k] - x0[k]));
  }
  return out;
}

// ------------------------------------------------------------------ reference

namespace {

std::size_t steps_for(double span, double h, const char* what) {
  const double q = span / h;
  const double r = std::round(q);
  if (r < 1.0 || std::abs(q - r) > 1e-9 * std::max(1.0, r)) {
    throw ConfigurationError(std::string(what) + ": step does not divide the interval");
  }
  return static_cast<std::size_t>(r);
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t cache_key(const ProductFlowDefinition& flow, std::span<const Matrix> w0,
                        double t_final, double h_ref, double record_h,
                        const SolverConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  h = fnv1a(h, flow.name.data(), flow.name.size());
  for (double v : {t_final, h_ref, record_h, cfg.abs_tol}) h = fnv1a(h, &v, sizeof v);
  const std::uint64_t iters = cfg.max_iter;
  h = fnv1a(h, &iters, sizeof iters);
  for (const auto& w : w0)
    for (const Complex& z : w.data()) {
      const double re = z.real(), im = z.imag();
      h = fnv1a(h, &re, sizeof re);
      h = fnv1a(h, &im, sizeof im);
    }
  return h;
}

std::filesystem::path cache_path(const std::filesystem::path& dir, std::uint64_t key) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "ref-%016llx.bin", static_cast<unsigned long long>(key));
  return dir / buf;
}

bool load_cached(const std::filesystem::path& file, std::span<const Matrix> w0,
                 ReferenceSolution& ref) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return false;
  std::uint64_t count = 0;
  double consistency = 0.0;
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  in.read(reinterpret_cast<char*>(&consistency), sizeof consistency);
  if (!in) return false;
  std::vector<double> times(count);
  std::vector<std::vector<Matrix>> states;
  for (std::uint64_t k = 0; k < count; ++k) {
    in.read(reinterpret_cast<char*>(&times[k]), sizeof(double));
    std::vector<Matrix> state;
    for (const auto& w : w0) {
      Matrix m(w.rows(), w.cols());
      in.read(reinterpret_cast<char*>(m.data().data()),
              static_cast<std::streamsize>(m.size() * sizeof(Complex)));
      state.push_back(std::move(m));
    }
    states.push_back(std::move(state));
  }
  if (!in) return false;
  ref.times = std::move(times);
  ref.states = std::move(states);
  ref.self_consistency = consistency;
  return true;
}

void store_cached(const std::filesystem::path& file, const ReferenceSolution& ref) {
  std::filesystem::create_directories(file.parent_path());
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    const std::uint64_t count = ref.states.size();
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    out.write(reinterpret_cast<const char*>(&ref.self_consistency), sizeof(double));
    for (std::size_t k = 0; k < ref.states.size(); ++k) {
      out.write(reinterpret_cast<const char*>(&ref.times[k]), sizeof(double));
      for (const auto& m : ref.states[k])
        out.write(reinterpret_cast<const char*>(m.data().data()),
                  static_cast<std::streamsize>(m.size() * sizeof(Complex)));
    }
  }
  std::filesystem::rename(tmp, file);
}

// States of an order-6 run at step h, kept every `every` steps.
std::vector<std::vector<Matrix>> run_recorded(const ProductFlowDefinition& flow,
                                              const ButcherTableau& t,
                                              std::span<const Matrix> w0, double h,
                                              std::size_t nsteps, std::size_t every,
                                              const SolverConfig& cfg) {
  std::vector<Matrix> w(w0.begin(), w0.end());
  std::vector<std::vector<Matrix>> out{w};
  for (std::size_t k = 1; k <= nsteps; ++k) {
    w = product_step(flow, t, w, h, cfg);
    if (k % every == 0) out.push_back(w);
  }
  return out;
}

double tuple_distance(std::span<const Matrix> a, std::span<const Matrix> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double d = frobenius_norm(a[c] - b[c]);
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

ReferenceSolution reference_solution(const ProductFlowDefinition& flow,
                                     std::span<const Matrix> w0, double t_final,
                                     double h_min, const ReferenceOptions& options) {
  if (!(t_final > 0.0)) throw ConfigurationError("reference: T must be positive");
  if (!(h_min > 0.0)) throw ConfigurationError("reference: h_min must be positive");
  ReferenceSolution ref;
  ref.h_ref = std::min(std::pow(0.5, 14), h_min / 8.0);
  ref.record_h = h_min;
  const std::size_t records = steps_for(t_final, h_min, "reference");
  const std::size_t every = steps_for(h_min, ref.h_ref, "reference");

  std::optional<std::filesystem::path> file;
  if (options.cache_dir) {
    file = cache_path(*options.cache_dir,
                      cache_key(flow, w0, t_final, ref.h_ref, h_min, options.solver));
    if (load_cached(*file, w0, ref) && ref.states.size() == records + 1) return ref;
  }

  const ButcherTableau t = gauss_legendre(3);
  ref.states = run_recorded(flow, t, w0, ref.h_ref, records * every, every, options.solver);
  ref.times.clear();
  for (std::size_t k = 0; k <= records; ++k) ref.times.push_back(static_cast<double>(k) * h_min);

  ref.self_consistency = std::numeric_limits<double>::quiet_NaN();
  if (options.check_consistency && every % 2 == 0) {
    const auto coarse =
        run_recorded(flow, t, w0, 2.0 * ref.h_ref, records * every / 2, every / 2, options.solver);
    double d = 0.0;
    for (std::size_t k = 0; k < coarse.size(); ++k)
      d = std::max(d, tuple_distance(coarse[k], ref.states[k]));
    ref.self_consistency = d;
  }
  if (file) store_cached(*file, ref);
  return ref;
}

SlopeFit fit_loglog_slope(std::span<const double> hs, std::span<const double> errors,
                          double floor) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(hs.size(), errors.size()); ++i) {
    if (errors[i] >= floor && std::isfinite(errors[i]) && hs[i] > 0.0) {
      lx.push_back(std::log(hs[i]));
      ly.push_back(std::log(errors[i]));
    }
  }
  if (lx.size() < 2) {
    throw DegenerateFitError("convergence fit: " + std::to_string(lx.size()) +
                             " point(s) above the round-off floor; use a larger T or h");
  }
  return {linear_slope(lx, ly), lx.size()};
}

std::vector<double> halving_steps(int first, int last) {
  std::vector<double> hs;
  for (int e = first; e <= last; ++e) hs.push_back(std::pow(0.5, e));
  return hs;
}

ButcherTableau tableau_for_order(std::size_t order) {
  if (order == 0 || order % 2 != 0) {
    throw ConfigurationError("order must be 2, 4 or 6, got " + std::to_string(order));
  }
  return gauss_legendre(order / 2);
}

bool ConvergenceReport::degenerate() const {
  return std::any_of(series.begin(), series.end(),
                     [](const ConvergenceSeries& s) { return s.degenerate; });
}

ConvergenceReport convergence_study(const ProductFlowDefinition& flow,
                                    std::span<const Matrix> w0,
                                    const ConvergenceOptions& options) {
  if (options.hs.empty()) throw DegenerateFitError("convergence study: no step sizes");
  for (double h : options.hs)
    if (!(h > 0.0)) throw ConfigurationError("convergence study: step sizes must be positive");
  const double h_min = *std::min_element(options.hs.begin(), options.hs.end());

  ConvergenceReport report;
  report.flow = flow.name;
  report.t_final = options.t_final;
  report.floor = options.floor;

  const ReferenceSolution ref =
      reference_solution(flow, w0, options.t_final, h_min, options.reference);
  report.h_ref = ref.h_ref;
  report.reference_consistency = ref.self_consistency;

  auto run = [&](std::size_t order, double h) {
    const ButcherTableau t = tableau_for_order(order);
    const std::size_t n = steps_for(options.t_final, h, "convergence study");
    const std::size_t every = steps_for(h, h_min, "convergence study");
    std::vector<Matrix> w(w0.begin(), w0.end());
    double err = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      w = product_step(flow, t, w, h, options.solver);
      err = std::max(err, tuple_distance(w, ref.states[k * every]));
    }
    return err;
  };

  std::vector<std::vector<std::future<double>>> pending;
  for (std::size_t order : options.orders) {
    tableau_for_order(order);
    auto& row = pending.emplace_back();
    for (double h : options.hs)
      row.push_back(std::async(options.parallel ? std::launch::async : std::launch::deferred,
                               run, order, h));
  }

  for (std::size_t o = 0; o < options.orders.size(); ++o) {
    ConvergenceSeries s;
    s.order = options.orders[o];
    s.hs = options.hs;
    for (auto& f : pending[o]) s.errors.push_back(f.get());
    try {
      const SlopeFit fit = fit_loglog_slope(s.hs, s.errors, options.floor);
      s.slope = fit.slope;
      s.points_used = fit.points_used;
    } catch (const DegenerateFitError&) {
      if (options.throw_on_degenerate) throw;
      s.degenerate = true;
      s.slope = std::numeric_limits<double>::quiet_NaN();
    }
    report.series.push_back(std::move(s));
  }
  return report;
}

// ------------------------------------------------------------------------ CSV

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw DimensionError("csv: header/column mismatch");
  std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw DimensionError("csv: ragged columns");
  std::string text;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) text += ',';
    text += header[j];
  }
  text += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) text += ',';
      text += format_double(columns[j][r]);
    }
    text += '\n';
  }
  write_text_atomic(path, text);
}

void write_states_csv(const std::filesystem::path& path, const TrajectoryRecord& tr) {
  std::vector<std::string> header{"time"};
  std::vector<std::vector<double>> cols{tr.times};
  if (!tr.states.empty()) {
    const auto& first = tr.states.front();
    for (std::size_t c = 0; c < first.size(); ++c) {
      const std::string prefix = first.size() > 1 ? "w" + std::to_string(c) + "_" : "w_";
      for (std::size_t i = 0; i < first[c].rows(); ++i)
        for (std::size_t j = 0; j < first[c].cols(); ++j) {
          const std::string base = prefix + std::to_string(i) + "_" + std::to_string(j);
          std::vector<double> re, im;
          for (const auto& s : tr.states) {
            re.push_back(s[c](i, j).real());
            im.push_back(s[c](i, j).imag());
          }
          header.push_back(base + "_re");
          cols.push_back(std::move(re));
          header.push_back(base + "_im");
          cols.push_back(std::move(im));
        }
    }
  }
  write_csv(path, header, cols);
}

std::vector<std::filesystem::path> write_monitor_csvs(const std::filesystem::path& dir,
                                                      const TrajectoryRecord& tr,
                                                      const std::string& prefix) {
  std::vector<std::string> groups;
  for (const auto& m : tr.monitors)
    if (std::find(groups.begin(), groups.end(), m.group) == groups.end())
      groups.push_back(m.group);
  std::vector<std::filesystem::path> paths;
  for (const auto& g : groups) {
    std::vector<std::string> header{"time"};
    std::vector<std::vector<double>> cols{tr.times};
    for (const auto& m : tr.monitors) {
      if (m.group != g) continue;
      header.push_back(m.name);
      cols.push_back(m.values);
    }
    const auto path = dir / (prefix + g + ".csv");
    write_csv(path, header, cols);
    paths.push_back(path);
  }
  return paths;
}

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceReport& r) {
  std::vector<double> order, h, err;
  for (const auto& s : r.series)
    for (std::size_t i = 0; i < s.hs.size(); ++i) {
      order.push_back(static_cast<double>(s.order));
      h.push_back(s.hs[i]);
      err.push_back(s.errors[i]);
    }
  write_csv(path, {"order", "h", "error"}, {order, h, err});
}

}  // namespace isoflow
