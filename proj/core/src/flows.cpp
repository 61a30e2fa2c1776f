#include "isoflow/flows.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "isoflow/errors.hpp"
#include "isoflow/random.hpp"

namespace isoflow {

// ---------------------------------------------------------------- rigid body

InertiaAction InertiaAction::isotropic(std::size_t n) {
  return from_coefficients(n, std::vector<double>(n * n, 1.0));
}

InertiaAction InertiaAction::row_scaled(std::span<const double> d) {
  const std::size_t n = d.size();
  std::vector<double> coeff(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(d[i] > 0.0)) {
      throw ConfigurationError("inertia: row scaling must be positive");
    }
    for (std::size_t j = 0; j < n; ++j)
      coeff[i * n + j] = 0.5 * (1.0 / d[i] + 1.0 / d[j]);
  }
  return from_coefficients(n, std::move(coeff));
}

InertiaAction InertiaAction::from_coefficients(std::size_t n,
                                               std::vector<double> coeff) {
  if (coeff.size() != n * n) {
    throw ConfigurationError("inertia: expected n x n coefficients");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (coeff[i * n + j] != coeff[j * n + i]) {
        throw ConfigurationError("inertia: coefficients must be symmetric");
      }
      if (i != j && !(coeff[i * n + j] > 0.0)) {
        throw ConfigurationError("inertia: not positive definite on so(n)");
      }
    }
  }
  return {n, std::move(coeff)};
}

Matrix InertiaAction::apply(const Matrix& w) const {
  if (w.rows() != n || w.cols() != n) {
    throw DimensionError("inertia: dimension mismatch");
  }
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = coeff[i * n + j] * w(i, j);
  return r;
}

FlowDefinition rigid_body_flow(const InertiaAction& inertia) {
  FlowDefinition f;
  f.name = "rigid-body-" + std::to_string(inertia.n);
  f.dimension = inertia.n;
  f.b = [inertia](const Matrix& w) { return -inertia.apply(w); };
  f.hamiltonian = [inertia](const Matrix& w) {
    return 0.5 * frobenius_inner(inertia.apply(w), w).real();
  };
  f.subspace = SubspaceDescriptor::so(inertia.n);
  return f;
}

Matrix rigid_body_initial(std::size_t n) {
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i < j) {
        w(i, j) = 0.1;
      } else if (i > j) {
        w(i, j) = -0.1;
      }
  return w;
}

// ---------------------------------------------------------------------- toda

Matrix toda_b(const Matrix& w) {
  require_square(w, "toda B");
  const std::size_t n = w.rows();
  Matrix b(n, n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    b(k, k + 1) = w(k, k + 1);
    b(k + 1, k) = -w(k + 1, k);
  }
  b(0, n - 1) = -w(0, n - 1);
  b(n - 1, 0) = w(n - 1, 0);
  return b;
}

FlowDefinition toda_flow(std::size_t n) {
  if (n < 3) {
    throw ConfigurationError("toda: n must be at least 3, got " + std::to_string(n));
  }
  FlowDefinition f;
  f.name = "toda-" + std::to_string(n);
  f.dimension = n;
  f.b = toda_b;
  // Extended Hamiltonian; the 2 Tr(W^2) part is a Casimir.
  f.hamiltonian = [](const Matrix& w) {
    return -0.5 * frobenius_inner(w, toda_b(w)).real() +
           2.0 * trace(w * w).real();
  };
  f.subspace = SubspaceDescriptor::symmetric_real();
  return f;
}

Matrix toda_initial(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (b.size() != n || n < 3) {
    throw ConfigurationError("toda: need n >= 3 diagonal and band values");
  }
  Matrix l(n, n);
  for (std::size_t k = 0; k < n; ++k) l(k, k) = a[k];
  for (std::size_t k = 0; k + 1 < n; ++k) {
    l(k, k + 1) = b[k];
    l(k + 1, k) = b[k];
  }
  l(0, n - 1) = b[n - 1];
  l(n - 1, 0) = b[n - 1];
  return l;
}

// ------------------------------------------------------------- Bloch-Iserles

FlowDefinition bloch_iserles_flow(const Matrix& n_skew) {
  require_square(n_skew, "bloch-iserles N");
  const double scale = std::max(1.0, max_abs(n_skew));
  if (max_abs(n_skew + transpose(n_skew)) > 1e-14 * scale ||
      max_abs(n_skew - real_part(n_skew)) > 0.0) {
    throw ConfigurationError("bloch-iserles: N must be real skew-symmetric");
  }
  FlowDefinition f;
  f.dimension = n_skew.rows();
  f.name = "bloch-iserles-" + std::to_string(f.dimension);
  f.b = [n_skew](const Matrix& w) { return n_skew * w + w * n_skew; };
  f.hamiltonian = [n_skew](const Matrix& w) {
    return trace(w * w * n_skew).real();
  };
  f.subspace = SubspaceDescriptor::symmetric_real();
  return f;
}

Matrix bloch_iserles_n() {
  const double s = 1.0 / std::sqrt(2.0);
  return Matrix{{0.0, s, 0.0}, {-s, 0.0, s}, {0.0, -s, 0.0}};
}

Matrix bloch_iserles_initial() {
  return Matrix{{0.0163, 0.3928, 0.2415},
                {0.3928, 0.1501, 0.3443},
                {0.2415, 0.3443, 0.6603}};
}

// ----------------------------------------------------------------------- Chu

Matrix chu_b(const Matrix& w) {
  require_square(w, "chu B");
  const std::size_t n = w.rows();
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i < j) {
        b(i, j) = w(i, j - 1) - w(i + 1, j);
      } else if (i > j) {
        b(i, j) = w(i, j + 1) - w(i - 1, j);
      }
    }
  }
  return b;
}

FlowDefinition chu_flow(std::size_t n, bool force_centro) {
  if (n < 2) throw ConfigurationError("chu: n must be at least 2");
  FlowDefinition f;
  f.name = "chu-" + std::to_string(n) + (force_centro ? "-centro" : "");
  f.dimension = n;
  f.b = chu_b;
  f.subspace = force_centro
                   ? SubspaceDescriptor::intersection(
                         {SubspaceDescriptor::symmetric_real(),
                          SubspaceDescriptor::centrosymmetric()})
                   : SubspaceDescriptor::symmetric_real();
  return f;
}

Matrix chu_initial() {
  return Matrix{{0.1336, 0.0, 0.0, 0.5669},
                {0.0, -0.1336, 0.378, 0.0},
                {0.0, 0.378, -0.1336, 0.0},
                {0.5669, 0.0, 0.0, 0.1336}};
}

// ------------------------------------------------------------------ Brockett

FlowDefinition brockett_flow(const Matrix& n_hermitian) {
  require_square(n_hermitian, "brockett N");
  if (max_abs(n_hermitian - conj_transpose(n_hermitian)) >
      1e-14 * std::max(1.0, max_abs(n_hermitian))) {
    throw ConfigurationError("brockett: N must be self-adjoint");
  }
  FlowDefinition f;
  f.dimension = n_hermitian.rows();
  f.name = "brockett-" + std::to_string(f.dimension);
  f.b = [n_hermitian](const Matrix& w) { return commutator(n_hermitian, w); };
  f.subspace = SubspaceDescriptor::hermitian(f.dimension);
  return f;
}

Matrix brockett_initial(std::uint64_t seed) {
  SplitMixNormal rng(seed);
  return random_hermitian(rng, 3, 0.5);
}

// ------------------------------------------------------------------- su(2)

namespace {

const std::array<Matrix, 3>& pauli() {
  static const std::array<Matrix, 3> sigma = {
      Matrix{{0.0, 1.0}, {1.0, 0.0}},
      Matrix{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}},
      Matrix{{1.0, 0.0}, {0.0, -1.0}}};
  return sigma;
}

}  // namespace

Matrix su2_from_vector(const std::array<double, 3>& x) {
  Matrix w(2, 2);
  for (int k = 0; k < 3; ++k) w.add_scaled(Complex(0.0, -0.5 * x[k]), pauli()[k]);
  return w;
}

std::array<double, 3> su2_to_vector(const Matrix& w) {
  if (w.rows() != 2 || w.cols() != 2) throw DimensionError("su2_to_vector: need 2x2");
  std::array<double, 3> x{};
  for (int k = 0; k < 3; ++k)
    x[k] = (Complex(0.0, 1.0) * trace(w * pauli()[k])).real();
  return x;
}

// ------------------------------------------------------------ point vortices

ProductFlowDefinition point_vortex_flow(std::vector<double> strengths) {
  const std::size_t m = strengths.size();
  if (m < 1) throw ConfigurationError("point vortices: need at least one vortex");
  for (double g : strengths)
    if (g == 0.0 || !std::isfinite(g))
      throw ConfigurationError("point vortices: strengths must be finite and nonzero");
  ProductFlowDefinition f;
  f.name = "vortices-" + std::to_string(m);
  f.components.assign(m, {2, SubspaceDescriptor::su(2)});
  f.weights = strengths;

  // Chordal argument 1 - <W_i, W_j> / (|W_i| |W_j|).
  struct Pair {
    double f, g, ni, nj;
  };
  auto pair_terms = [](const Matrix& wi, const Matrix& wj) {
    const double ni = frobenius_norm(wi), nj = frobenius_norm(wj);
    if (ni == 0.0 || nj == 0.0) {
      throw SingularityError("point vortices: zero vortex position");
    }
    const double g = frobenius_inner(wi, wj).real();
    const double f = 1.0 - g / (ni * nj);
    if (f <= 1e-12) throw SingularityError("point vortices: collision");
    return Pair{f, g, ni, nj};
  };
  const double k = 1.0 / (4.0 * std::numbers::pi);

  f.b = [strengths, pair_terms, k](std::span<const Matrix> w) {
    const std::size_t m = w.size();
    std::vector<Matrix> b(m, Matrix(2, 2));
    for (std::size_t i = 0; i < m; ++i) {
      Matrix grad(2, 2);
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        const auto [fij, g, ni, nj] = pair_terms(w[i], w[j]);
        // d f_ij / d W_i
        Matrix df = (-1.0 / (ni * nj)) * w[j];
        df.add_scaled(g / (ni * ni * ni * nj), w[i]);
        grad.add_scaled(-k * strengths[i] * strengths[j] / fij, df);
      }
      // Each vortex carries the symplectic weight Gamma_i.
      b[i] = conj_transpose((1.0 / strengths[i]) * grad);
    }
    return b;
  };
  f.hamiltonian = [strengths, pair_terms, k](std::span<const Matrix> w) {
    double h = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = i + 1; j < w.size(); ++j)
        h -= k * strengths[i] * strengths[j] * std::log(pair_terms(w[i], w[j]).f);
    return h;
  };
  return f;
}

// ---------------------------------------------------------- Heisenberg chain

ProductFlowDefinition heisenberg_chain_flow(std::size_t n) {
  if (n < 2) throw ConfigurationError("heisenberg chain: n must be at least 2");
  ProductFlowDefinition f;
  f.name = "heisenberg-" + std::to_string(n);
  f.components.assign(n, {2, SubspaceDescriptor::su(2)});
  f.weights.assign(n, 1.0);
  f.b = [](std::span<const Matrix> w) {
    const std::size_t m = w.size();
    std::vector<Matrix> b;
    b.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
      b.push_back(conj_transpose(w[(i + m - 1) % m] + w[(i + 1) % m]));
    return b;
  };
  f.hamiltonian = [](std::span<const Matrix> w) {
    const std::size_t m = w.size();
    double h = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      h += frobenius_inner(w[i], w[(i + 1) % m]).real();
    return h;
  };
  return f;
}

Matrix project_subspace(const Matrix& w, const SubspaceDescriptor& s) {
  return s.project(w);
}

// ------------------------------------------------------------------- presets

ProductFlowDefinition FlowPreset::system() const {
  if (const auto* single = std::get_if<FlowDefinition>(&flow)) {
    return as_product(*single);
  }
  return std::get<ProductFlowDefinition>(flow);
}

std::size_t FlowPreset::dimension() const {
  if (const auto* single = std::get_if<FlowDefinition>(&flow)) return single->dimension;
  const auto& p = std::get<ProductFlowDefinition>(flow);
  std::size_t d = 0;
  for (const auto& c : p.components) d += c.dimension;
  return d;
}

std::string FlowPreset::subspace_kind() const {
  if (const auto* single = std::get_if<FlowDefinition>(&flow))
    return single->subspace.describe();
  const auto& p = std::get<ProductFlowDefinition>(flow);
  return "product(" + std::to_string(p.size()) + "x" +
         p.components.front().subspace.describe() + ")";
}

bool FlowPreset::has_hamiltonian() const {
  if (const auto* single = std::get_if<FlowDefinition>(&flow))
    return single->has_hamiltonian();
  return std::get<ProductFlowDefinition>(flow).has_hamiltonian();
}

std::vector<std::string> preset_names() {
  return {"rigid-body-10", "toda-4",     "bloch-iserles-3", "chu-4",
          "chu-4-centro",  "brockett-3", "vortices-4",      "heisenberg-N"};
}

FlowPreset make_preset(std::string_view name, std::uint64_t seed) {
  FlowPreset p;
  p.name = std::string(name);
  if (name == "rigid-body-10") {
    std::vector<double> d(10);
    for (std::size_t i = 0; i < 10; ++i) d[i] = static_cast<double>(i + 1);
    p.flow = rigid_body_flow(InertiaAction::row_scaled(d));
    p.initial = {rigid_body_initial(10)};
  } else if (name == "toda-4") {
    const std::vector<double> ab = {-1.0, 1.0, -1.0, 1.0};
    p.flow = toda_flow(4);
    p.initial = {toda_initial(ab, ab)};
  } else if (name == "bloch-iserles-3") {
    p.flow = bloch_iserles_flow(bloch_iserles_n());
    p.initial = {bloch_iserles_initial()};
  } else if (name == "chu-4" || name == "chu-4-centro") {
    p.flow = chu_flow(4, name == "chu-4-centro");
    p.initial = {chu_initial()};
  } else if (name == "brockett-3") {
    const std::vector<double> n = {1.0, 2.0, 3.0};
    p.flow = brockett_flow(Matrix::diagonal(std::span<const double>(n)));
    p.initial = {brockett_initial(seed)};
  } else if (name == "vortices-4") {
    p.flow = point_vortex_flow({1.0, 1.0, 1.0, 1.0});
    p.initial = {su2_from_vector({1.0, 0.0, 0.0}), su2_from_vector({-1.0, 0.0, 0.0}),
                 su2_from_vector({0.0, 1.0, 0.0}), su2_from_vector({0.0, -1.0, 0.0})};
  } else if (name.starts_with("heisenberg-")) {
    const std::string count(name.substr(11));
    std::size_t n = 0;
    try {
      std::size_t used = 0;
      n = std::stoul(count, &used);
      if (used != count.size()) n = 0;
    } catch (const std::exception&) {
      n = 0;
    }
    if (n < 2) {
      throw ConfigurationError("unknown flow preset '" + p.name +
                               "' (heisenberg-N needs an integer N >= 2)");
    }
    p.flow = heisenberg_chain_flow(n);
    // Seeded random unit spins.
    SplitMixNormal rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
      std::array<double, 3> x{rng.normal(), rng.normal(), rng.normal()};
      const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      for (auto& v : x) v /= r;
      p.initial.push_back(su2_from_vector(x));
    }
  } else {
    throw ConfigurationError("unknown flow preset '" + p.name + "'");
  }
  return p;
}

}  // namespace isoflow
