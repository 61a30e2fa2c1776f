#pragma once

// Flow definitions: W' = [B(W), W] on a subspace S, optionally Hamiltonian
// with B(W) = grad H(W)^dagger.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isoflow/linalg.hpp"
#include "isoflow/subspace.hpp"

namespace isoflow {

using MatrixMap = std::function<Matrix(const Matrix&)>;
using ScalarFunction = std::function<double(const Matrix&)>;

using TupleMap = std::function<std::vector<Matrix>(std::span<const Matrix>)>;
using TupleScalarFunction = std::function<double(std::span<const Matrix>)>;

struct FlowDefinition {
  std::string name;
  std::size_t dimension = 0;
  MatrixMap b;
  std::optional<ScalarFunction> hamiltonian;
  SubspaceDescriptor subspace = SubspaceDescriptor::full();

  // B(project(W)).
  Matrix evaluate_b(const Matrix& w) const;
  // H(project(W)); throws ConfigurationError when the flow has none.
  double evaluate_hamiltonian(const Matrix& w) const;
  bool has_hamiltonian() const { return hamiltonian.has_value(); }
};

struct ProductComponent {
  std::size_t dimension = 0;
  SubspaceDescriptor subspace = SubspaceDescriptor::full();
};

// Direct product of isospectral flows with coupled B_i(W_1, ..., W_m).
struct ProductFlowDefinition {
  std::string name;
  std::vector<ProductComponent> components;
  TupleMap b;
  std::optional<TupleScalarFunction> hamiltonian;
  // Weights of the momentum map M = sum_i weights_i W_i; empty when the
  // flow carries none.
  std::vector<double> weights;

  std::size_t size() const { return components.size(); }

  // Projects every component onto its subspace, then evaluates B.
  std::vector<Matrix> evaluate_b(std::span<const Matrix> w) const;
  double evaluate_hamiltonian(std::span<const Matrix> w) const;
  bool has_hamiltonian() const { return hamiltonian.has_value(); }
  bool has_momentum() const { return !weights.empty(); }
  Matrix momentum(std::span<const Matrix> w) const;

  std::vector<Matrix> project(std::span<const Matrix> w) const;
  // Largest per-component membership residual.
  double membership_residual(std::span<const Matrix> w) const;
};

// A single flow viewed as a one-component product.
ProductFlowDefinition as_product(const FlowDefinition& flow);

}  // namespace isoflow
