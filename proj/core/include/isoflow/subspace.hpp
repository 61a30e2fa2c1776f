#pragma once

// Linear subspaces S of gl(n, C) on which isospectral flows evolve.
//
// Every descriptor knows its Frobenius-orthogonal projector. B is always
// evaluated at project(W), which extends B off S as a function that is
// constant on the affine translates of the orthogonal complement of S.

#include <optional>
#include <string>
#include <vector>

#include "isoflow/linalg.hpp"

namespace isoflow {

enum class SubspaceKind {
  kFull,             // gl(n, C)
  kSpecialLinear,    // trace zero
  kRealForm,         // gl(n, R)
  kJQuadratic,       // W^dagger J + J W = 0
  kComplement,       // W^dagger J = J W, orthogonal complement of the above
  kIntersection,
  kCentrosymmetric,  // W E = E W, E the exchange matrix
  kSymmetricReal,    // real symmetric
};

// J with J^2 = c I, restricted to scalar multiples of unitaries so that
// W -> J^{-1} W^dagger J is a Frobenius isometry.
struct JStructure {
  Matrix j;
  Matrix j_inv;
  double c = 1.0;

  // Validates J^2 = c I (within 1e-12), invertibility and the isometry
  // requirement; throws ConfigurationError otherwise.
  static JStructure make(Matrix j, double c);
  static JStructure identity(std::size_t n) { return make(Matrix::identity(n), 1.0); }

  // J^{-1} W^dagger J.
  Matrix twist(const Matrix& w) const;
};

class SubspaceDescriptor {
 public:
  static SubspaceDescriptor full();
  static SubspaceDescriptor special_linear();
  static SubspaceDescriptor real_form();
  static SubspaceDescriptor j_quadratic(JStructure j);
  static SubspaceDescriptor complement(JStructure j);
  static SubspaceDescriptor centrosymmetric();
  static SubspaceDescriptor symmetric_real();
  static SubspaceDescriptor intersection(std::vector<SubspaceDescriptor> parts);

  // Common named algebras.
  static SubspaceDescriptor so(std::size_t n);       // real skew-symmetric
  static SubspaceDescriptor su(std::size_t n);       // traceless skew-Hermitian
  static SubspaceDescriptor hermitian(std::size_t n);

  SubspaceKind kind() const { return kind_; }
  const std::vector<SubspaceDescriptor>& parts() const { return parts_; }
  const std::optional<JStructure>& j_structure() const { return j_; }

  Matrix project(const Matrix& w) const;

  // ||W - project(W)||_F.
  double membership_residual(const Matrix& w) const;
  bool contains(const Matrix& w, double tol = 1e-10) const {
    return membership_residual(w) <= tol;
  }

  bool is_full() const { return kind_ == SubspaceKind::kFull; }

  struct QuadraticConstraint {
    bool complement;  // false: W^dagger J + J W = 0, true: W^dagger J = J W
    JStructure j;
  };

  // The J-quadratic or complement constraint carried by this subspace or any
  // intersected part, if there is one. n sizes the implicit J = I of
  // symmetric-real.
  std::optional<QuadraticConstraint> quadratic_constraint(std::size_t n) const;

  std::string describe() const;

 private:
  SubspaceDescriptor() = default;

  SubspaceKind kind_ = SubspaceKind::kFull;
  std::optional<JStructure> j_;
  std::vector<SubspaceDescriptor> parts_;
};

Matrix exchange_matrix(std::size_t n);

}  // namespace isoflow
