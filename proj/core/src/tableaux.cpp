#include "isoflow/tableaux.hpp"

#include <algorithm>
#include <cmath>

#include "isoflow/errors.hpp"

namespace isoflow {

void ButcherTableau::validate_shape() const {
  if (stages == 0) throw ConfigurationError("tableau: zero stages");
  if (a.size() != stages * stages || b.size() != stages || c.size() != stages) {
    throw ConfigurationError("tableau '" + name +
                             "': A must be s x s and b, c of length s");
  }
}

ButcherTableau gauss_legendre(std::size_t s) {
  ButcherTableau t;
  t.stages = s;
  switch (s) {
    case 1:
      t.a = {0.5};
      t.b = {1.0};
      t.c = {0.5};
      t.name = "gauss-legendre-1";
      break;
    case 2: {
      const double r3 = std::sqrt(3.0);
      t.a = {0.25, 0.25 - r3 / 6.0,  //
             0.25 + r3 / 6.0, 0.25};
      t.b = {0.5, 0.5};
      t.c = {0.5 - r3 / 6.0, 0.5 + r3 / 6.0};
      t.name = "gauss-legendre-2";
      break;
    }
    case 3: {
      const double r15 = std::sqrt(15.0);
      t.a = {5.0 / 36.0, 2.0 / 9.0 - r15 / 15.0, 5.0 / 36.0 - r15 / 30.0,
             5.0 / 36.0 + r15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r15 / 24.0,
             5.0 / 36.0 + r15 / 30.0, 2.0 / 9.0 + r15 / 15.0, 5.0 / 36.0};
      t.b = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
      t.c = {0.5 - r15 / 10.0, 0.5, 0.5 + r15 / 10.0};
      t.name = "gauss-legendre-3";
      break;
    }
    default:
      throw UnsupportedError("gauss_legendre: only 1, 2 or 3 stages are shipped, got " +
                             std::to_string(s));
  }
  return t;
}

ButcherTableau lobatto_iiia_2() {
  return {2, {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5}, {0.0, 1.0}, "lobatto-iiia-2"};
}

ButcherTableau lobatto_iiib_2() {
  return {2, {0.5, 0.0, 0.5, 0.0}, {0.5, 0.5}, {0.0, 1.0}, "lobatto-iiib-2"};
}

PartitionedTableau lobatto_iiia_iiib_2() {
  return {lobatto_iiia_2(), lobatto_iiib_2()};
}

ButcherTableau explicit_euler() {
  return {1, {0.0}, {1.0}, {0.0}, "explicit-euler"};
}

double check_symplectic(const ButcherTableau& t) {
  t.validate_shape();
  double r = 0.0;
  for (std::size_t i = 0; i < t.stages; ++i)
    for (std::size_t j = 0; j < t.stages; ++j)
      r = std::max(r, std::abs(t.b[i] * t.coeff(i, j) + t.b[j] * t.coeff(j, i) -
                               t.b[i] * t.b[j]));
  return r;
}

double check_partitioned_symplectic(const PartitionedTableau& t) {
  t.first.validate_shape();
  t.second.validate_shape();
  if (t.first.stages != t.second.stages) {
    throw ConfigurationError("partitioned tableau: stage counts differ (" +
                             std::to_string(t.first.stages) + " vs " +
                             std::to_string(t.second.stages) + ")");
  }
  const auto& A = t.first;
  const auto& Ahat = t.second;
  double r = 0.0;
  for (std::size_t i = 0; i < A.stages; ++i) {
    r = std::max(r, std::abs(Ahat.b[i] - A.b[i]));
    for (std::size_t j = 0; j < A.stages; ++j)
      r = std::max(r, std::abs(A.b[i] * Ahat.coeff(i, j) +
                               Ahat.b[j] * A.coeff(j, i) - A.b[i] * Ahat.b[j]));
  }
  return r;
}

double consistency_residual(const ButcherTableau& t) {
  t.validate_shape();
  double r = 0.0;
  for (std::size_t i = 0; i < t.stages; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < t.stages; ++j) row += t.coeff(i, j);
    r = std::max(r, std::abs(row - t.c[i]));
  }
  return r;
}

}  // namespace isoflow
