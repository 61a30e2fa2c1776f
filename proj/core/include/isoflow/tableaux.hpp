#pragma once

// Butcher tableaux and their symplecticity conditions.

#include <cstddef>
#include <string>
#include <vector>

namespace isoflow {

struct ButcherTableau {
  std::size_t stages = 0;
  std::vector<double> a;  // stages x stages, row-major
  std::vector<double> b;
  std::vector<double> c;
  std::string name;

  double coeff(std::size_t i, std::size_t j) const { return a[i * stages + j]; }

  // Throws ConfigurationError on inconsistent array sizes.
  void validate_shape() const;

  bool operator==(const ButcherTableau& other) const {
    return stages == other.stages && a == other.a && b == other.b && c == other.c;
  }
};

struct PartitionedTableau {
  ButcherTableau first;   // (A, b): X stages
  ButcherTableau second;  // (A-hat, b-hat): Y and K stages

  bool coincide() const { return first == second; }
};

// Gauss-Legendre collocation, s in {1, 2, 3}; order 2s.
ButcherTableau gauss_legendre(std::size_t s);

// 2-stage Lobatto IIIA and IIIB (a symplectic partitioned pair).
ButcherTableau lobatto_iiia_2();
ButcherTableau lobatto_iiib_2();
PartitionedTableau lobatto_iiia_iiib_2();

// A = [[0]], b = [1]: not symplectic. Used as a negative control.
ButcherTableau explicit_euler();

// max_ij |b_i a_ij + b_j a_ji - b_i b_j|.
double check_symplectic(const ButcherTableau& t);

// max over |b_i ahat_ij + bhat_j a_ji - b_i bhat_j| and |bhat_i - b_i|.
// Throws ConfigurationError on stage-count mismatch.
double check_partitioned_symplectic(const PartitionedTableau& t);

// max_i |c_i - sum_j a_ij|.
double consistency_residual(const ButcherTableau& t);

}  // namespace isoflow
