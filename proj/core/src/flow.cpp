#include "isoflow/flow.hpp"

#include <algorithm>
#include <utility>

#include "isoflow/errors.hpp"

namespace isoflow {

Matrix FlowDefinition::evaluate_b(const Matrix& w) const {
  if (subspace.is_full()) return b(w);
  return b(subspace.project(w));
}

double FlowDefinition::evaluate_hamiltonian(const Matrix& w) const {
  if (!hamiltonian) {
    throw ConfigurationError("flow '" + name + "' has no Hamiltonian");
  }
  if (subspace.is_full()) return (*hamiltonian)(w);
  return (*hamiltonian)(subspace.project(w));
}

std::vector<Matrix> ProductFlowDefinition::project(
    std::span<const Matrix> w) const {
  if (w.size() != components.size()) {
    throw DimensionError("product flow '" + name + "': expected " +
                         std::to_string(components.size()) +
                         " components, got " + std::to_string(w.size()));
  }
  std::vector<Matrix> p;
  p.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].rows() != components[i].dimension || !w[i].is_square()) {
      throw DimensionError("product flow '" + name + "': component " +
                           std::to_string(i) + " has wrong shape");
    }
    p.push_back(components[i].subspace.project(w[i]));
  }
  return p;
}

std::vector<Matrix> ProductFlowDefinition::evaluate_b(
    std::span<const Matrix> w) const {
  const auto p = project(w);
  return b(p);
}

double ProductFlowDefinition::evaluate_hamiltonian(
    std::span<const Matrix> w) const {
  if (!hamiltonian) {
    throw ConfigurationError("flow '" + name + "' has no Hamiltonian");
  }
  const auto p = project(w);
  return (*hamiltonian)(p);
}

Matrix ProductFlowDefinition::momentum(std::span<const Matrix> w) const {
  if (!has_momentum()) {
    throw ConfigurationError("flow '" + name + "' has no momentum map");
  }
  if (w.size() != weights.size()) {
    throw DimensionError("momentum: component count mismatch");
  }
  Matrix m(w[0].rows(), w[0].cols());
  for (std::size_t i = 0; i < w.size(); ++i) m.add_scaled(weights[i], w[i]);
  return m;
}

double ProductFlowDefinition::membership_residual(
    std::span<const Matrix> w) const {
  double r = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    r = std::max(r, components[i].subspace.membership_residual(w[i]));
  return r;
}

ProductFlowDefinition as_product(const FlowDefinition& flow) {
  ProductFlowDefinition p;
  p.name = flow.name;
  p.components = {{flow.dimension, flow.subspace}};
  // The single component is already projected by ProductFlowDefinition.
  p.b = [b = flow.b](std::span<const Matrix> w) {
    return std::vector<Matrix>{b(w[0])};
  };
  if (flow.hamiltonian) {
    p.hamiltonian = [h = *flow.hamiltonian](std::span<const Matrix> w) {
      return h(w[0]);
    };
  }
  return p;
}

}  // namespace isoflow
