#include "isoflow/subspace.hpp"

#include <cmath>
#include <utility>

#include "isoflow/errors.hpp"

namespace isoflow {

JStructure JStructure::make(Matrix j, double c) {
  require_square(j, "J structure");
  const std::size_t n = j.rows();
  if (c == 0.0) throw ConfigurationError("J structure: c must be nonzero");
  const Matrix eye = Matrix::identity(n);
  const double tol = 1e-12 * std::max(1.0, std::abs(c));
  if (max_abs_diff(j * j, c * eye) > tol) {
    throw ConfigurationError("J structure: J^2 != c I");
  }
  if (max_abs_diff(conj_transpose(j) * j, std::abs(c) * eye) > tol) {
    throw ConfigurationError(
        "J structure: J must be a scalar multiple of a unitary matrix");
  }
  JStructure s;
  s.j_inv = inverse(j);
  s.j = std::move(j);
  s.c = c;
  return s;
}

Matrix JStructure::twist(const Matrix& w) const {
  return j_inv * conj_transpose(w) * j;
}

SubspaceDescriptor SubspaceDescriptor::full() { return {}; }

SubspaceDescriptor SubspaceDescriptor::special_linear() {
  SubspaceDescriptor s;
  s.kind_ = SubspaceKind::kSpecialLinear;
  return s;
}

SubspaceDescriptor SubspaceDescriptor::real_form() {
  SubspaceDescriptor s;
  s.kind_ = SubspaceKind::kRealForm;
  return s;
}

SubspaceDescriptor SubspaceDescriptor::j_quadratic(JStructure j) {
  SubspaceDescriptor s;
  s.kind_ = SubspaceKind::kJQuadratic;
  s.j_ = std::move(j);
  return s;
}

SubspaceDescriptor SubspaceDescriptor::complement(JStructure j) {
  SubspaceDescriptor s;
  s.kind_ = SubspaceKind::kComplement;
  s.j_ = std::move(j);
  return s;
}

SubspaceDescriptor SubspaceDescriptor::centrosymmetric() {
  SubspaceDescriptor s;
  s.kind_ = SubspaceKind::kCentrosymmetric;
  return s;
}

SubspaceDescriptor SubspaceDescriptor::symmetric_real() {
  SubspaceDescriptor s;
  s.kind_ = SubspaceKind::kSymmetricReal;
  return s;
}

SubspaceDescriptor SubspaceDescriptor::intersection(
    std::vector<SubspaceDescriptor> parts) {
  if (parts.empty()) return full();
  if (parts.size() == 1) return std::move(parts.front());
  SubspaceDescriptor s;
  s.kind_ = SubspaceKind::kIntersection;
  s.parts_ = std::move(parts);
  return s;
}

SubspaceDescriptor SubspaceDescriptor::so(std::size_t n) {
  return intersection({real_form(), j_quadratic(JStructure::identity(n))});
}

SubspaceDescriptor SubspaceDescriptor::su(std::size_t n) {
  return intersection({j_quadratic(JStructure::identity(n)), special_linear()});
}

SubspaceDescriptor SubspaceDescriptor::hermitian(std::size_t n) {
  return complement(JStructure::identity(n));
}

Matrix exchange_matrix(std::size_t n) {
  Matrix e(n, n);
  for (std::size_t i = 0; i < n; ++i) e(i, n - 1 - i) = 1.0;
  return e;
}

namespace {

void check_j_dimension(const JStructure& j, const Matrix& w) {
  if (j.j.rows() != w.rows()) {
    throw DimensionError("subspace: J is " + std::to_string(j.j.rows()) +
                         "x" + std::to_string(j.j.rows()) + " but W is " +
                         std::to_string(w.rows()) + "x" +
                         std::to_string(w.cols()));
  }
}

}  // namespace

Matrix SubspaceDescriptor::project(const Matrix& w) const {
  require_square(w, "subspace projection");
  const std::size_t n = w.rows();
  switch (kind_) {
    case SubspaceKind::kFull:
      return w;
    case SubspaceKind::kSpecialLinear: {
      Matrix p = w;
      const Complex mean = trace(w) / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) p(i, i) -= mean;
      return p;
    }
    case SubspaceKind::kRealForm:
      return real_part(w);
    case SubspaceKind::kJQuadratic: {
      check_j_dimension(*j_, w);
      Matrix p = w - j_->twist(w);
      return p *= 0.5;
    }
    case SubspaceKind::kComplement: {
      check_j_dimension(*j_, w);
      Matrix p = w + j_->twist(w);
      return p *= 0.5;
    }
    case SubspaceKind::kCentrosymmetric: {
      Matrix p(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          p(i, j) = 0.5 * (w(i, j) + w(n - 1 - i, n - 1 - j));
      return p;
    }
    case SubspaceKind::kSymmetricReal: {
      Matrix p(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          p(i, j) = 0.5 * (w(i, j).real() + w(j, i).real());
      return p;
    }
    case SubspaceKind::kIntersection: {
      // Alternating projections; one sweep is exact when the projectors
      // commute, which holds for every combination shipped here.
      Matrix p = w;
      for (int sweep = 0; sweep < 200; ++sweep) {
        Matrix prev = p;
        for (const auto& part : parts_) p = part.project(p);
        if (max_abs_diff(p, prev) <= 1e-16 * (1.0 + max_abs(p))) break;
      }
      return p;
    }
  }
  return w;
}

double SubspaceDescriptor::membership_residual(const Matrix& w) const {
  return frobenius_norm(w - project(w));
}

std::optional<SubspaceDescriptor::QuadraticConstraint>
SubspaceDescriptor::quadratic_constraint(std::size_t n) const {
  switch (kind_) {
    case SubspaceKind::kJQuadratic:
      return QuadraticConstraint{false, *j_};
    case SubspaceKind::kComplement:
      return QuadraticConstraint{true, *j_};
    case SubspaceKind::kSymmetricReal:
      return QuadraticConstraint{true, JStructure::identity(n)};
    default:
      break;
  }
  for (const auto& part : parts_)
    if (auto q = part.quadratic_constraint(n)) return q;
  return std::nullopt;
}

std::string SubspaceDescriptor::describe() const {
  switch (kind_) {
    case SubspaceKind::kFull:
      return "full";
    case SubspaceKind::kSpecialLinear:
      return "special-linear";
    case SubspaceKind::kRealForm:
      return "real-form";
    case SubspaceKind::kJQuadratic:
      return "j-quadratic";
    case SubspaceKind::kComplement:
      return "complement";
    case SubspaceKind::kCentrosymmetric:
      return "centrosymmetric";
    case SubspaceKind::kSymmetricReal:
      return "symmetric-real";
    case SubspaceKind::kIntersection: {
      std::string s;
      for (const auto& part : parts_) {
        if (!s.empty()) s += "&";
        s += part.describe();
      }
      return s;
    }
  }
  return "unknown";
}

}  // namespace isoflow
