#pragma once

// Catalogue of isospectral flows and their named presets.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "isoflow/flow.hpp"

namespace isoflow {

// Diagonal-like inertia action on so(n): (I^{-1} W)_ij = coeff_ij W_ij with a
// symmetric coefficient matrix, positive off the diagonal.
struct InertiaAction {
  std::size_t n = 0;
  std::vector<double> coeff;  // n x n row-major

  static InertiaAction isotropic(std::size_t n);
  // (I^{-1} W)_ij = W_ij / d_i, symmetrized to (1/d_i + 1/d_j) / 2 so that it
  // maps so(n) to itself. Both give the same quadratic form on so(n).
  static InertiaAction row_scaled(std::span<const double> d);
  static InertiaAction from_coefficients(std::size_t n, std::vector<double> coeff);

  Matrix apply(const Matrix& w) const;
};

FlowDefinition rigid_body_flow(const InertiaAction& inertia);
FlowDefinition toda_flow(std::size_t n);
FlowDefinition bloch_iserles_flow(const Matrix& n_skew);
FlowDefinition chu_flow(std::size_t n, bool force_centro);
FlowDefinition brockett_flow(const Matrix& n_hermitian);
ProductFlowDefinition point_vortex_flow(std::vector<double> strengths);
ProductFlowDefinition heisenberg_chain_flow(std::size_t n);

// Raw B maps, usable on any matrix.
Matrix toda_b(const Matrix& w);
Matrix chu_b(const Matrix& w);

Matrix project_subspace(const Matrix& w, const SubspaceDescriptor& s);

// su(2) <-> R^3 by x -> -(i/2)(x1 s1 + x2 s2 + x3 s3), s_k the Pauli matrices.
Matrix su2_from_vector(const std::array<double, 3>& x);
std::array<double, 3> su2_to_vector(const Matrix& w);

// Initial data of the catalogue experiments.
Matrix rigid_body_initial(std::size_t n);
Matrix toda_initial(std::span<const double> a, std::span<const double> b);
Matrix bloch_iserles_n();
Matrix bloch_iserles_initial();
Matrix chu_initial();
Matrix brockett_initial(std::uint64_t seed);

inline constexpr std::uint64_t kDefaultSeed = 20190501;

struct FlowPreset {
  std::string name;
  std::variant<FlowDefinition, ProductFlowDefinition> flow;
  std::vector<Matrix> initial;  // one matrix per component
  double h = 0.1;
  double t_final = 100.0;

  bool is_product() const { return flow.index() == 1; }
  // The flow as a product system (single flows become one component).
  ProductFlowDefinition system() const;
  std::size_t dimension() const;
  std::string subspace_kind() const;
  bool has_hamiltonian() const;
};

// rigid-body-10, toda-4, bloch-iserles-3, chu-4, chu-4-centro, brockett-3,
// vortices-4 and heisenberg-N (any N >= 2, e.g. heisenberg-3).
std::vector<std::string> preset_names();
FlowPreset make_preset(std::string_view name, std::uint64_t seed = kDefaultSeed);

}  // namespace isoflow
