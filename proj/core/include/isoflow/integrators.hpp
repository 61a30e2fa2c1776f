#pragma once

// IsoSyRK and IsoSyPRK step maps for W' = [B(W), W], and a trajectory driver.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isoflow/flow.hpp"
#include "isoflow/linalg.hpp"
#include "isoflow/subspace.hpp"
#include "isoflow/tableaux.hpp"

namespace isoflow {

enum class VariantKind { kGeneral, kJQuadratic, kComplement };

// How the Y stages are obtained. General solves them; the restricted variants
// synthesize Y_i = -/+ J^{-1} X_i^dagger J and use the matching update.
struct SchemeVariant {
  VariantKind kind = VariantKind::kGeneral;
  std::optional<JStructure> j;

  static SchemeVariant general() { return {}; }
  static SchemeVariant j_quadratic(JStructure j);
  static SchemeVariant complement(JStructure j);

  // JQuadratic/Complement when the subspace carries such a constraint,
  // General otherwise.
  static SchemeVariant natural_for(const SubspaceDescriptor& s, std::size_t n);

  bool restricted() const { return kind != VariantKind::kGeneral; }
  std::string describe() const;
};

enum class SolverMethod { kFixedPoint, kNewton };

struct SolverConfig {
  SolverMethod method = SolverMethod::kFixedPoint;
  double abs_tol = 1e-13;
  std::size_t max_iter = 100;
  // Once abs_tol is met, keep iterating while the increment still halves
  // (still inside max_iter), so accepted stages sit at the round-off floor.
  bool refine = true;

  // Throws ConfigurationError unless abs_tol > 0 and max_iter >= 1.
  void validate() const;
};

// Stage values of one component. K is stored as an s x s grid, k[i * s + j].
struct StageSet {
  std::size_t stages = 0;
  std::vector<Matrix> x;
  std::vector<Matrix> y;
  std::vector<Matrix> k;
  std::vector<Matrix> wtilde;
  std::vector<Matrix> b;  // B(project(Wtilde_i)), without the factor h

  std::size_t iterations = 0;
  double residual = 0.0;
  bool newton_fallback = false;

  const Matrix& kij(std::size_t i, std::size_t j) const { return k[i * stages + j]; }
};

struct ProductStageSet {
  std::vector<StageSet> components;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool newton_fallback = false;
};

// Stage system of one step. Throws ConvergenceError when the solver misses
// abs_tol within max_iter.
StageSet solve_stages(const FlowDefinition& flow, const ButcherTableau& t,
                      const Matrix& w, double h, const SchemeVariant& variant,
                      const SolverConfig& cfg = {});

ProductStageSet solve_product_stages(const ProductFlowDefinition& flow,
                                     const PartitionedTableau& t,
                                     std::span<const Matrix> w, double h,
                                     std::span<const SchemeVariant> variants,
                                     const SolverConfig& cfg = {});

Matrix isosyrk_step(const FlowDefinition& flow, const ButcherTableau& t,
                    const Matrix& w, double h, const SchemeVariant& variant,
                    const SolverConfig& cfg = {});

// General-variant partitioned step. The pair must be partitioned symplectic
// (residual <= 1e-12); on a J-quadratic or complement subspace the two
// tableaux must coincide. Violations throw ConfigurationError.
Matrix isosyprk_step(const FlowDefinition& flow, const PartitionedTableau& pt,
                     const Matrix& w, double h, const SolverConfig& cfg = {});

// Coupled step of a product system, one variant per component (empty span:
// the natural variant of each component's subspace).
std::vector<Matrix> product_step(const ProductFlowDefinition& flow,
                                 const ButcherTableau& t,
                                 std::span<const Matrix> w, double h,
                                 const SolverConfig& cfg = {},
                                 std::span<const SchemeVariant> variants = {});

// Same, with a partitioned pair and optional stage output.
std::vector<Matrix> product_step(const ProductFlowDefinition& flow,
                                 const PartitionedTableau& t,
                                 std::span<const Matrix> w, double h,
                                 const SolverConfig& cfg,
                                 std::span<const SchemeVariant> variants,
                                 ProductStageSet* stages);

struct Scheme {
  PartitionedTableau tableau;  // first == second for plain IsoSyRK
  bool partitioned = false;
  // Applied to every component; nullopt picks each component's natural variant.
  std::optional<SchemeVariant> variant;

  static Scheme isosyrk(ButcherTableau t, std::optional<SchemeVariant> v = {});
  static Scheme isosyprk(PartitionedTableau pt);
};

// Monitor groups recorded by integrate().
inline constexpr const char* kMonitorCasimir = "casimir";
inline constexpr const char* kMonitorHamiltonian = "hamiltonian";
inline constexpr const char* kMonitorSubspace = "subspace";
inline constexpr const char* kMonitorIterations = "iterations";
inline constexpr const char* kMonitorMomentum = "momentum";

struct MonitorSeries {
  std::string group;
  std::string name;
  std::vector<double> values;
};

struct IntegrationOptions {
  std::size_t nsteps = 0;
  std::size_t stride = 1;
  std::vector<std::string> monitors;
  std::size_t pmax = 6;
  SolverConfig solver;
};

struct TrajectoryRecord {
  double h = 0.0;
  std::size_t stride = 1;
  std::vector<double> times;
  std::vector<std::vector<Matrix>> states;  // one tuple per recorded step
  std::vector<MonitorSeries> monitors;
  bool complete = true;
  std::optional<std::size_t> failed_step;
  std::string failure;
  std::vector<std::string> warnings;

  const MonitorSeries* find(std::string_view group, std::string_view name) const;
};

// Runs nsteps steps from w0. Throws when the first step fails (the message
// names the step); a later failure yields a partial record with
// complete == false.
TrajectoryRecord integrate(const ProductFlowDefinition& flow, const Scheme& scheme,
                           std::span<const Matrix> w0, double h,
                           const IntegrationOptions& options);

TrajectoryRecord integrate(const FlowDefinition& flow, const Scheme& scheme,
                           const Matrix& w0, double h,
                           const IntegrationOptions& options);

std::vector<std::string> known_monitors();

}  // namespace isoflow
