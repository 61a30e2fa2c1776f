#pragma once

// Invariant monitors, reference solutions and the convergence-order study.

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isoflow/flow.hpp"
#include "isoflow/integrators.hpp"

namespace isoflow {

// max over components and p = 1..pmax of |Tr(W_k^p) - Tr(W_0^p)|, per state.
std::vector<double> casimir_drift(const TrajectoryRecord& tr, std::size_t pmax);

// Same, one series per component.
std::vector<std::vector<double>> casimir_drift_by_component(const TrajectoryRecord& tr,
                                                            std::size_t pmax);

// Largest change of any sorted eigenvalue, per state (opt-in: slower and
// limited by the eigensolver's own accuracy).
std::vector<double> eigenvalue_drift(const TrajectoryRecord& tr);

// Least-squares slope of y against x.
double linear_slope(std::span<const double> x, std::span<const double> y);
double max_abs_value(std::span<const double> v);
// max(v) - min(v).
double peak_to_peak(std::span<const double> v);

struct HamiltonianDrift {
  std::vector<double> drift;  // H(W_k) - H(W_0)
  double max_abs = 0.0;
  double slope = 0.0;  // per unit time
};

// Throws ConfigurationError when the flow has no Hamiltonian.
HamiltonianDrift hamiltonian_drift(const TrajectoryRecord& tr,
                                   const ProductFlowDefinition& flow);
HamiltonianDrift hamiltonian_drift(const TrajectoryRecord& tr, const FlowDefinition& flow);

// ||M(W_k) - M(W_0)||_F with M = sum_i gamma_i W_i. Throws ConfigurationError
// for single-matrix trajectories or a strength count mismatch.
std::vector<double> momentum_drift(const TrajectoryRecord& tr,
                                   std::span<const double> gamma);

// Drift of the three R^3 components of M for su(2)-valued systems.
std::array<std::vector<double>, 3> momentum_vector_drift(const TrajectoryRecord& tr,
                                                         std::span<const double> gamma);

struct ReferenceSolution {
  double h_ref = 0.0;
  double record_h = 0.0;
  std::vector<double> times;
  std::vector<std::vector<Matrix>> states;
  // Largest difference from the same integrator at 2 h_ref on the recorded
  // grid; NaN when the check was skipped.
  double self_consistency = 0.0;
};

struct ReferenceOptions {
  SolverConfig solver;
  bool check_consistency = true;
  std::optional<std::filesystem::path> cache_dir;
};

// Order-6 IsoSyRK with h_ref = min(0.5^14, h_min / 8), states recorded every
// h_min up to T.
ReferenceSolution reference_solution(const ProductFlowDefinition& flow,
                                     std::span<const Matrix> w0, double t_final,
                                     double h_min, const ReferenceOptions& options = {});

struct SlopeFit {
  double slope = 0.0;
  std::size_t points_used = 0;
};

// Least squares on (log h, log e), skipping errors below floor. Throws
// DegenerateFitError with fewer than two usable points.
SlopeFit fit_loglog_slope(std::span<const double> hs, std::span<const double> errors,
                          double floor = 1e-12);

struct ConvergenceSeries {
  std::size_t order = 0;
  std::vector<double> hs;
  std::vector<double> errors;
  double slope = 0.0;
  std::size_t points_used = 0;
  bool degenerate = false;  // too few points above the floor; slope unset
};

struct ConvergenceReport {
  std::string flow;
  double t_final = 0.0;
  double h_ref = 0.0;
  double reference_consistency = 0.0;
  double floor = 1e-12;
  std::vector<ConvergenceSeries> series;

  bool degenerate() const;
};

struct ConvergenceOptions {
  std::vector<std::size_t> orders = {2, 4, 6};
  std::vector<double> hs;
  double t_final = 1.0;
  double floor = 1e-12;
  SolverConfig solver;
  ReferenceOptions reference;
  // false: mark degenerate series instead of throwing DegenerateFitError.
  bool throw_on_degenerate = true;
  // Trajectories for the individual (order, h) pairs run concurrently.
  bool parallel = true;
};

// Every h must divide T and be a multiple of the smallest h.
ConvergenceReport convergence_study(const ProductFlowDefinition& flow,
                                    std::span<const Matrix> w0,
                                    const ConvergenceOptions& options);

// hs = 0.5^first .. 0.5^last.
std::vector<double> halving_steps(int first, int last);

// Gauss-Legendre tableau of the given even order (2, 4 or 6).
ButcherTableau tableau_for_order(std::size_t order);

// CSV with a header row; numbers as %.17g. Written to a temporary file and
// renamed into place.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

// time plus the real and imaginary part of every state entry.
void write_states_csv(const std::filesystem::path& path, const TrajectoryRecord& tr);

// One file per monitor group, <dir>/<prefix><group>.csv. Returns the paths.
std::vector<std::filesystem::path> write_monitor_csvs(const std::filesystem::path& dir,
                                                      const TrajectoryRecord& tr,
                                                      const std::string& prefix = "monitor_");

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceReport& r);

void write_text_atomic(const std::filesystem::path& path, const std::string& text);

std::string format_double(double v);

}  // namespace isoflow
