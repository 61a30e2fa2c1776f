#include <gtest/gtest.h>

#include <cmath>

#include "isoflow/errors.hpp"
#include "isoflow/flows.hpp"
#include "isoflow/integrators.hpp"
#include "oracles.hpp"

using namespace isoflow;
using namespace isoflow::testing;

namespace {

std::vector<double> iota(std::size_t n) {
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<double>(i + 1);
  return d;
}

std::vector<ProductFlowDefinition> catalogue() {
  std::vector<ProductFlowDefinition> out;
  for (const auto& name : preset_names()) {
    out.push_back(make_preset(name == "heisenberg-N" ? "heisenberg-3" : name).system());
  }
  out.push_back(point_vortex_flow({1.0, 2.0, 3.0, 4.0}));
  out.push_back(as_product(rigid_body_flow(InertiaAction::row_scaled(iota(4)))));
  return out;
}

std::vector<Matrix> random_state(SplitMixNormal& rng, const ProductFlowDefinition& f) {
  std::vector<Matrix> w;
  for (const auto& c : f.components) w.push_back(random_member(rng, c));
  return w;
}

// |dH[V] - sum_i gamma_i Re Tr(B_i V_i)| relative to the gradient scale, for a
// random direction V in the product subspace.
double gradient_mismatch(const ProductFlowDefinition& f, std::span<const Matrix> w,
                         std::span<const double> gamma, SplitMixNormal& rng) {
  const auto h = [&](std::span<const Matrix> x) { return f.evaluate_hamiltonian(x); };
  const std::vector<Matrix> b = f.evaluate_b(w);
  double worst = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    Matrix v = random_member(rng, f.components[c]);
    v *= 1.0 / frobenius_norm(v);
    const double fd = directional_derivative(h, w, c, v);
    const double analytic = gamma[c] * trace(b[c] * v).real();
    const double scale = std::abs(gamma[c]) * frobenius_norm(b[c]);
    worst = std::max(worst, std::abs(fd - analytic) / std::max(scale, 1e-8));
  }
  return worst;
}

}  // namespace

TEST(Catalogue, NormalizerCondition) {
  SplitMixNormal rng(31);
  for (const auto& f : catalogue()) {
    for (int k = 0; k < 100; ++k) {
      const auto w = random_state(rng, f);
      std::vector<Matrix> b;
      try {
        b = f.evaluate_b(w);
      } catch (const SingularityError&) {
        continue;
      }
      for (std::size_t c = 0; c < f.size(); ++c) {
        const Matrix d = commutator(b[c], w[c]);
        EXPECT_LE(f.components[c].subspace.membership_residual(d),
                  1e-10 * std::max(1.0, frobenius_norm(d)))
            << f.name;
      }
    }
  }
}

TEST(Catalogue, HamiltonianGradients) {
  SplitMixNormal rng(32);
  for (const auto& f : catalogue()) {
    if (!f.has_hamiltonian() || f.name.starts_with("toda")) continue;
    std::vector<double> gamma(f.size(), 1.0);
    if (f.name.starts_with("vortices")) gamma = f.weights;
    for (int k = 0; k < 20; ++k) {
      const auto w = random_state(rng, f);
      EXPECT_LE(gradient_mismatch(f, w, gamma, rng), 1e-6) << f.name;
    }
  }
}

TEST(Catalogue, PresetNames) {
  const auto names = preset_names();
  EXPECT_EQ(names.size(), 8u);
  for (const auto& n : names) {
    const auto p = make_preset(n == "heisenberg-N" ? "heisenberg-5" : n);
    const auto sys = p.system();
    ASSERT_EQ(p.initial.size(), sys.size()) << n;
    EXPECT_LE(sys.membership_residual(p.initial), 1e-12) << n;
    EXPECT_EQ(p.h, 0.1) << n;
  }
  EXPECT_THROW(make_preset("heisenberg-1"), ConfigurationError);
  EXPECT_THROW(make_preset("nope"), ConfigurationError);
}

TEST(RigidBody, PresetData) {
  const auto p = make_preset("rigid-body-10");
  const Matrix& w = p.initial[0];
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j)
      EXPECT_EQ(w(i, j), Complex(i < j ? 0.1 : (i > j ? -0.1 : 0.0)));
  const auto& f = std::get<FlowDefinition>(p.flow);
  SplitMixNormal rng(33);
  const Matrix v = random_skew_real(rng, 10);
  // On so(10) the symmetrized action gives the quadratic form of W_ij / i.
  double expected = 0.0;
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) expected += 0.5 * std::norm(v(i, j)) / (i + 1.0);
  EXPECT_NEAR(f.evaluate_hamiltonian(v), expected, 1e-12 * expected);
}

TEST(RigidBody, IsotropicBodyIsStationary) {
  SplitMixNormal rng(34);
  const auto f = rigid_body_flow(InertiaAction::isotropic(5));
  const Matrix w = random_skew_real(rng, 5);
  EXPECT_LE(max_abs_diff(f.evaluate_b(w), -w), 1e-15);
  EXPECT_LE(max_abs(commutator(f.evaluate_b(w), w)), 1e-14);
}

TEST(RigidBody, FreeBodyGradient) {
  SplitMixNormal rng(35);
  const auto f = as_product(rigid_body_flow(InertiaAction::row_scaled(iota(3))));
  const std::vector<double> gamma{1.0};
  for (int k = 0; k < 20; ++k) {
    const std::vector<Matrix> w{random_skew_real(rng, 3)};
    EXPECT_LE(gradient_mismatch(f, w, gamma, rng), 1e-6);
  }
}

TEST(RigidBody, RejectsBadInertia) {
  EXPECT_THROW(InertiaAction::from_coefficients(2, {1, 0, 0, 1}), ConfigurationError);
  EXPECT_THROW(InertiaAction::from_coefficients(2, {1, 2, 3, 1}), ConfigurationError);
  const std::vector<double> d{1.0, -1.0};
  EXPECT_THROW(InertiaAction::row_scaled(d), ConfigurationError);
}

TEST(Toda, PresetData) {
  const Matrix w = make_preset("toda-4").initial[0];
  const Matrix expected{{-1, -1, 0, 1}, {-1, 1, 1, 0}, {0, 1, -1, -1}, {1, 0, -1, 1}};
  EXPECT_EQ(w, expected);
}

TEST(Toda, BandPattern) {
  SplitMixNormal rng(36);
  const Matrix w = random_real(rng, 5);
  const Matrix b = toda_b(w);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      Complex e = 0.0;
      if (j == i + 1) e = w(i, j);
      if (i == j + 1) e = -w(i, j);
      if (i == 0 && j == 4) e = -w(i, j);
      if (i == 4 && j == 0) e = w(i, j);
      EXPECT_EQ(b(i, j), e);
    }
}

TEST(Toda, DiagonalIsStationary) {
  const std::vector<double> d{1, 2, 3, 4};
  EXPECT_EQ(max_abs(toda_b(Matrix::diagonal(std::span<const double>(d)))), 0.0);
}

TEST(Toda, PairingWithSymmetricStateVanishes) {
  SplitMixNormal rng(37);
  for (int k = 0; k < 20; ++k) {
    const Matrix w = random_symmetric_real(rng, 4);
    EXPECT_LE(std::abs(trace(conj_transpose(w) * toda_b(w))), 1e-12);
  }
}

TEST(Toda, ExtendedHamiltonianGradient) {
  // On all of gl(n, R) the gradient of the extension is -B(W) + 4 W^T; on
  // symmetric W its adjoint B(W) + 4 W generates the same flow as B(W).
  SplitMixNormal rng(38);
  const auto f = toda_flow(4);
  const auto h = [&](std::span<const Matrix> x) { return (*f.hamiltonian)(x[0]); };
  for (int k = 0; k < 20; ++k) {
    const std::vector<Matrix> w{random_real(rng, 4)};
    Matrix v = random_real(rng, 4);
    v *= 1.0 / frobenius_norm(v);
    const Matrix grad = -toda_b(w[0]) + 4.0 * transpose(w[0]);
    const double fd = directional_derivative(h, w, 0, v);
    EXPECT_LE(std::abs(fd - frobenius_inner(grad, v).real()), 1e-6 * frobenius_norm(grad));
  }
  for (int k = 0; k < 20; ++k) {
    const Matrix w = random_symmetric_real(rng, 4);
    const Matrix grad_adj = conj_transpose(-toda_b(w) + 4.0 * transpose(w));
    EXPECT_LE(max_abs_diff(commutator(grad_adj, w), commutator(toda_b(w), w)), 1e-13);
  }
}

TEST(Toda, RejectsSmallDimension) { EXPECT_THROW(toda_flow(2), ConfigurationError); }

TEST(BlochIserles, PresetData) {
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_EQ(bloch_iserles_n(), (Matrix{{0, s, 0}, {-s, 0, s}, {0, -s, 0}}));
  EXPECT_EQ(bloch_iserles_initial(), (Matrix{{0.0163, 0.3928, 0.2415},
                                             {0.3928, 0.1501, 0.3443},
                                             {0.2415, 0.3443, 0.6603}}));
}

TEST(BlochIserles, CommutatorIdentity) {
  SplitMixNormal rng(39);
  const Matrix n = bloch_iserles_n();
  const auto f = bloch_iserles_flow(n);
  for (int k = 0; k < 20; ++k) {
    const Matrix w = random_symmetric_real(rng, 3);
    EXPECT_LE(max_abs_diff(commutator(f.evaluate_b(w), w), commutator(n, w * w)), 1e-12);
  }
}

TEST(BlochIserles, ZeroNIsStationary) {
  SplitMixNormal rng(40);
  const auto f = bloch_iserles_flow(Matrix::zeros(3));
  const Matrix w = random_symmetric_real(rng, 3);
  EXPECT_EQ(max_abs(commutator(f.evaluate_b(w), w)), 0.0);
}

TEST(BlochIserles, RejectsNonSkewN) {
  EXPECT_THROW(bloch_iserles_flow(Matrix::identity(3)), ConfigurationError);
  EXPECT_THROW(bloch_iserles_flow(Matrix{{0, Complex(0, 1)}, {Complex(0, 1), 0}}),
               ConfigurationError);
}

TEST(Chu, PresetData) {
  EXPECT_EQ(chu_initial(), (Matrix{{0.1336, 0, 0, 0.5669},
                                   {0, -0.1336, 0.378, 0},
                                   {0, 0.378, -0.1336, 0},
                                   {0.5669, 0, 0, 0.1336}}));
}

TEST(Chu, PrintedPattern) {
  Matrix w(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) w(i, j) = w(j, i) = 10.0 * (i + 1) + (j + 1);
  const Matrix b = chu_b(w);
  auto W = [&](int i, int j) { return w(i - 1, j - 1); };
  auto B = [&](int i, int j) { return b(i - 1, j - 1); };
  EXPECT_EQ(B(1, 2), W(1, 1) - W(2, 2));
  EXPECT_EQ(B(1, 3), W(1, 2) - W(2, 3));
  EXPECT_EQ(B(1, 4), W(1, 3) - W(2, 4));
  EXPECT_EQ(B(2, 3), W(2, 2) - W(3, 3));
  EXPECT_EQ(B(2, 4), W(2, 3) - W(3, 4));
  EXPECT_EQ(B(3, 4), W(3, 3) - W(4, 4));
  for (int i = 1; i <= 4; ++i) EXPECT_EQ(B(i, i), Complex(0.0));
}

TEST(Chu, SkewForSymmetricState) {
  SplitMixNormal rng(41);
  for (int k = 0; k < 20; ++k) {
    const Matrix w = random_symmetric_real(rng, 5);
    const Matrix b = chu_b(w);
    EXPECT_LE(max_abs(b + transpose(b)), 1e-15);
  }
}

TEST(Chu, ToeplitzFixedPoints) {
  SplitMixNormal rng(42);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> t(5);
    for (auto& v : t) v = rng.normal();
    Matrix w(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) w(i, j) = t[i > j ? i - j : j - i];
    EXPECT_LE(frobenius_norm(chu_b(w)), 1e-14);
  }
}

TEST(Chu, CentrosymmetricB) {
  SplitMixNormal rng(43);
  const Matrix e = exchange_matrix(4);
  for (int k = 0; k < 20; ++k) {
    const Matrix w = centro_symmetric_average(random_real(rng, 4));
    const Matrix b = chu_b(w);
    EXPECT_LE(max_abs(b * e - e * b), 1e-13);
  }
}

TEST(Chu, ForcedSubspace) {
  const auto f = chu_flow(4, true);
  EXPECT_EQ(f.subspace.kind(), SubspaceKind::kIntersection);
  EXPECT_EQ(chu_flow(4, false).subspace.kind(), SubspaceKind::kSymmetricReal);
  EXPECT_THROW(chu_flow(1, false), ConfigurationError);
}

TEST(Brockett, SkewHermitianB) {
  SplitMixNormal rng(44);
  const std::vector<double> d{1, 2, 3};
  const auto f = brockett_flow(Matrix::diagonal(std::span<const double>(d)));
  EXPECT_FALSE(f.has_hamiltonian());
  for (int k = 0; k < 20; ++k) {
    const Matrix w = random_hermitian_matrix(rng, 3);
    const Matrix b = f.evaluate_b(w);
    EXPECT_LE(max_abs(conj_transpose(b) + b), 1e-14);
  }
}

TEST(Brockett, DiagonalIsStationary) {
  const std::vector<double> d{1, 2, 3}, e{-1, 5, 0.5};
  const auto f = brockett_flow(Matrix::diagonal(std::span<const double>(d)));
  EXPECT_EQ(max_abs(f.evaluate_b(Matrix::diagonal(std::span<const double>(e)))), 0.0);
}

TEST(Brockett, RejectsNonHermitianN) {
  EXPECT_THROW(brockett_flow(Matrix{{0, 1}, {0, 0}}), ConfigurationError);
}

TEST(Brockett, SeededInitialIsReproducible) {
  EXPECT_EQ(brockett_initial(7), brockett_initial(7));
  EXPECT_NE(brockett_initial(7), brockett_initial(8));
  const Matrix w = brockett_initial(kDefaultSeed);
  EXPECT_LE(max_abs(w - conj_transpose(w)), 0.0);
}

TEST(Su2, RoundTrip) {
  const std::array<double, 3> x{0.3, -1.2, 2.5};
  const Matrix w = su2_from_vector(x);
  const auto y = su2_to_vector(w);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(x[k], y[k], 1e-15);
  EXPECT_TRUE(SubspaceDescriptor::su(2).contains(w, 1e-15));
}

TEST(PointVortices, PresetPositions) {
  const auto p = make_preset("vortices-4");
  const std::array<std::array<double, 3>, 4> x = {
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}}};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto y = su2_to_vector(p.initial[i]);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(y[k], x[i][k], 1e-15);
  }
}

TEST(PointVortices, TwoVortexGradient) {
  SplitMixNormal rng(45);
  const auto f = point_vortex_flow({1.5, -0.5});
  for (int k = 0; k < 20; ++k) {
    const std::vector<Matrix> w{random_su2(rng), random_su2(rng)};
    EXPECT_LE(gradient_mismatch(f, w, f.weights, rng), 1e-6);
  }
}

TEST(PointVortices, AntipodalPairConservesNorms) {
  const auto f = point_vortex_flow({1.0, 1.0});
  const std::vector<Matrix> w{su2_from_vector({0.0, 0.0, 1.0}), su2_from_vector({0.0, 0.0, -1.0})};
  const auto next = product_step(f, gauss_legendre(1), w, 0.1);
  for (std::size_t i = 0; i < 2; ++i)
    EXPECT_LE(std::abs(frobenius_norm(next[i]) - frobenius_norm(w[i])), 1e-12);
  EXPECT_LE(max_abs_diff(f.momentum(next), f.momentum(w)), 1e-12);
  EXPECT_LE(std::abs(f.evaluate_hamiltonian(next) - f.evaluate_hamiltonian(w)), 1e-12);
}

TEST(PointVortices, CollisionIsSingular) {
  const auto f = point_vortex_flow({1.0, 1.0});
  const Matrix a = su2_from_vector({0.0, 1.0, 0.0});
  const std::vector<Matrix> w{a, a};
  EXPECT_THROW(f.evaluate_b(w), SingularityError);
  EXPECT_THROW(point_vortex_flow({1.0, 0.0}), ConfigurationError);
}

TEST(PointVortices, OneStepKeepsNorms) {
  SplitMixNormal rng(46);
  const auto f = point_vortex_flow({1.0, 2.0, 3.0, 4.0});
  std::vector<Matrix> w;
  for (int i = 0; i < 4; ++i) w.push_back(random_su2(rng));
  const auto next = product_step(f, gauss_legendre(1), w, 0.1);
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_LE(std::abs(frobenius_norm(next[i]) - frobenius_norm(w[i])), 1e-11);
}

TEST(Heisenberg, EqualSpinsAreStationary) {
  SplitMixNormal rng(47);
  const auto f = heisenberg_chain_flow(4);
  const Matrix s = random_su2(rng);
  const std::vector<Matrix> w(4, s);
  const auto b = f.evaluate_b(w);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LE(max_abs_diff(b[i], 2.0 * conj_transpose(s)), 1e-15);
    EXPECT_LE(max_abs(commutator(b[i], w[i])), 1e-15);
  }
}

TEST(Heisenberg, ThreeSpinGradient) {
  SplitMixNormal rng(48);
  const auto f = heisenberg_chain_flow(3);
  const std::vector<double> gamma(3, 1.0);
  for (int k = 0; k < 20; ++k) {
    const std::vector<Matrix> w{random_su2(rng), random_su2(rng), random_su2(rng)};
    EXPECT_LE(gradient_mismatch(f, w, gamma, rng), 1e-6);
  }
}

TEST(Heisenberg, TwoSpinSwapSymmetry) {
  SplitMixNormal rng(49);
  const auto f = heisenberg_chain_flow(2);
  const Matrix a = random_su2(rng), b = random_su2(rng);
  const std::vector<Matrix> ab{a, b}, ba{b, a};
  EXPECT_EQ(f.evaluate_hamiltonian(ab), f.evaluate_hamiltonian(ba));
  EXPECT_LE(max_abs_diff(f.evaluate_b(ab)[0], 2.0 * conj_transpose(b)), 1e-15);
}
