#include <gtest/gtest.h>

#include <cmath>

#include "isoflow/errors.hpp"
#include "isoflow/linalg.hpp"
#include "oracles.hpp"

using namespace isoflow;
using namespace isoflow::testing;

namespace {

const Complex I(0.0, 1.0);

}  // namespace

TEST(Commutator, SelfCommutatorVanishes) {
  SplitMixNormal rng(1);
  const Matrix x = random_complex(rng, 4);
  EXPECT_EQ(max_abs(commutator(x, x)), 0.0);
}

TEST(Commutator, NilpotentPair) {
  const Matrix a{{0, 1}, {0, 0}};
  const Matrix b{{0, 0}, {1, 0}};
  const Matrix expected{{1, 0}, {0, -1}};
  EXPECT_EQ(commutator(a, b), expected);
}

TEST(Commutator, DiagonalMatricesCommute) {
  const std::vector<double> d = {1, 2, 3}, e = {-4, 0.5, 7};
  EXPECT_EQ(max_abs(commutator(Matrix::diagonal(std::span<const double>(d)),
                               Matrix::diagonal(std::span<const double>(e)))),
            0.0);
}

TEST(Commutator, DimensionMismatchThrows) {
  EXPECT_THROW(commutator(Matrix::zeros(2), Matrix::zeros(3)), DimensionError);
}

TEST(Commutator, TraceFreeProperty) {
  SplitMixNormal rng(2);
  for (int k = 0; k < 20; ++k) {
    const Matrix a = random_complex(rng, 6), b = random_complex(rng, 6);
    const double scale = frobenius_norm(a) * frobenius_norm(b);
    EXPECT_LE(std::abs(trace(commutator(a, b))), 1e-12 * scale);
  }
}

TEST(ConjTranspose, RealSymmetricIsFixed) {
  SplitMixNormal rng(3);
  const Matrix a = random_symmetric_real(rng, 4);
  EXPECT_EQ(conj_transpose(a), a);
}

TEST(ConjTranspose, ScalarConjugation) {
  EXPECT_EQ(conj_transpose(Matrix{{I}}), Matrix{{-I}});
}

TEST(ConjTranspose, SkewHermitianNegates) {
  SplitMixNormal rng(4);
  const Matrix g = random_complex(rng, 3);
  const Matrix a = g - conj_transpose(g);
  EXPECT_LE(max_abs_diff(conj_transpose(a), -a), 1e-15);
}

TEST(ConjTranspose, Involution) {
  SplitMixNormal rng(5);
  const Matrix a = random_complex(rng, 5);
  EXPECT_EQ(conj_transpose(conj_transpose(a)), a);
}

TEST(FrobeniusInner, IdentityGivesDimension) {
  EXPECT_EQ(frobenius_inner(Matrix::identity(5), Matrix::identity(5)), Complex(5.0));
}

TEST(FrobeniusInner, DiagonalExample) {
  const Matrix a{{1, 0}, {0, 0}};
  const Matrix b{{2, 0}, {0, 3}};
  EXPECT_EQ(frobenius_inner(a, b), Complex(2.0));
}

TEST(FrobeniusInner, ConjugateSymmetry) {
  SplitMixNormal rng(6);
  const Matrix a = random_complex(rng, 4), b = random_complex(rng, 4);
  EXPECT_LE(std::abs(frobenius_inner(a, b) - std::conj(frobenius_inner(b, a))), 1e-14);
}

TEST(FrobeniusInner, NormIsEntrywiseTwoNorm) {
  SplitMixNormal rng(7);
  const Matrix a = random_complex(rng, 4);
  double sq = 0.0;
  for (const Complex& z : a.data()) sq += std::norm(z);
  const Complex aa = frobenius_inner(a, a);
  EXPECT_EQ(aa.imag(), 0.0);
  EXPECT_GE(aa.real(), 0.0);
  EXPECT_NEAR(aa.real(), sq, 1e-13 * sq);
}

TEST(FrobeniusInner, DimensionMismatchThrows) {
  EXPECT_THROW(frobenius_inner(Matrix::zeros(2), Matrix::zeros(3)), DimensionError);
}

TEST(TracePowers, Identity) {
  const auto t = trace_powers(Matrix::identity(3), 3);
  ASSERT_EQ(t.size(), 3u);
  for (const auto& v : t) EXPECT_EQ(v, Complex(3.0));
}

TEST(TracePowers, Diagonal) {
  const auto t = trace_powers(Matrix{{1, 0}, {0, 2}}, 2);
  EXPECT_EQ(t[0], Complex(3.0));
  EXPECT_EQ(t[1], Complex(5.0));
}

TEST(TracePowers, MatchesEigenvaluePowerSums) {
  SplitMixNormal rng(8);
  for (int k = 0; k < 10; ++k) {
    const Matrix w = random_complex(rng, 5);
    const auto t = trace_powers(w, 6);
    const auto ev = oracle_eigenvalues(w);
    for (std::size_t p = 1; p <= 6; ++p) {
      Complex sum = 0.0;
      for (const auto& l : ev) sum += std::pow(l, static_cast<int>(p));
      EXPECT_LE(std::abs(t[p - 1] - sum), 1e-10 * std::max(1.0, std::abs(sum)));
    }
  }
}

TEST(TracePowers, ConjugationInvariant) {
  SplitMixNormal rng(9);
  for (int k = 0; k < 10; ++k) {
    const Matrix w = random_complex(rng, 4);
    const Matrix g = Matrix::identity(4) + 0.3 * random_complex(rng, 4);
    const auto a = trace_powers(w, 6);
    const auto b = trace_powers(g * w * inverse(g), 6);
    for (std::size_t p = 0; p < 6; ++p)
      EXPECT_LE(std::abs(a[p] - b[p]), 1e-9 * std::max(1.0, std::abs(a[p])));
  }
}

TEST(Eigenvalues, SortedDiagonal) {
  const std::vector<double> d = {3, 1, 2};
  const auto ev = eigenvalues(Matrix::diagonal(std::span<const double>(d)));
  ASSERT_EQ(ev.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(ev[i] - Complex(i + 1.0)), 0.0, 1e-14);
}

TEST(Eigenvalues, RotationGenerator) {
  const auto ev = eigenvalues(Matrix{{0, 1}, {-1, 0}});
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_LE(std::abs(ev[0] + I), 1e-14);
  EXPECT_LE(std::abs(ev[1] - I), 1e-14);
}

TEST(Eigenvalues, HermitianPowerSumsMatchTracePowers) {
  SplitMixNormal rng(10);
  const Matrix w = random_hermitian_matrix(rng, 5);
  const auto ev = eigenvalues(w);
  const auto t = trace_powers(w, 6);
  for (std::size_t p = 1; p <= 6; ++p) {
    Complex sum = 0.0;
    for (const auto& l : ev) sum += std::pow(l, static_cast<int>(p));
    EXPECT_LE(std::abs(t[p - 1] - sum), 1e-9 * std::max(1.0, std::abs(sum)));
  }
}

TEST(Eigenvalues, AgreesWithOracle) {
  SplitMixNormal rng(11);
  for (std::size_t n : {2u, 3u, 5u, 8u, 16u}) {
    const Matrix w = random_complex(rng, n);
    const auto a = eigenvalues(w);
    const auto b = oracle_eigenvalues(w);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) EXPECT_LE(std::abs(a[i] - b[i]), 1e-9) << "n=" << n;
  }
}

TEST(Eigenvalues, UnitaryConjugationPermutesNothing) {
  SplitMixNormal rng(12);
  const Matrix w = random_hermitian_matrix(rng, 4);
  const Eigen::MatrixXcd q =
      Eigen::HouseholderQR<Eigen::MatrixXcd>(to_eigen(random_complex(rng, 4))).householderQ();
  const Matrix u = from_eigen(q);
  const auto a = eigenvalues(w);
  const auto b = eigenvalues(u * w * conj_transpose(u));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LE(std::abs(a[i] - b[i]), 1e-9);
}

TEST(Inverse, MatchesOracle) {
  SplitMixNormal rng(13);
  const Matrix a = random_complex(rng, 5);
  EXPECT_LE(max_abs_diff(inverse(a), from_eigen(to_eigen(a).inverse())), 1e-11);
}

TEST(Inverse, SingularThrows) {
  EXPECT_THROW(inverse(Matrix{{1, 2}, {2, 4}}), ConfigurationError);
}
