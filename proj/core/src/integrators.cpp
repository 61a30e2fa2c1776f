#include "isoflow/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "isoflow/errors.hpp"

namespace isoflow {

SchemeVariant SchemeVariant::j_quadratic(JStructure j) {
  return {VariantKind::kJQuadratic, std::move(j)};
}

SchemeVariant SchemeVariant::complement(JStructure j) {
  return {VariantKind::kComplement, std::move(j)};
}

SchemeVariant SchemeVariant::natural_for(const SubspaceDescriptor& s, std::size_t n) {
  const auto q = s.quadratic_constraint(n);
  if (!q) return general();
  return q->complement ? complement(q->j) : j_quadratic(q->j);
}

std::string SchemeVariant::describe() const {
  switch (kind) {
    case VariantKind::kGeneral:
      return "general";
    case VariantKind::kJQuadratic:
      return "jquad";
    case VariantKind::kComplement:
      return "complement";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(abs_tol > 0.0)) throw ConfigurationError("solver: abs_tol must be positive");
  if (max_iter < 1) throw ConfigurationError("solver: max_iter must be at least 1");
}

namespace {

// Unknowns of all components, indexed [component][stage] (K: [component][i*s+j]).
struct Unknowns {
  std::vector<std::vector<Matrix>> x, y, k;
};

class StageSystem {
 public:
  StageSystem(const ProductFlowDefinition& flow, const PartitionedTableau& t,
              std::span<const Matrix> w, double h,
              std::span<const SchemeVariant> variants)
      : flow_(flow), a_(t.first), ahat_(t.second), w_(w), h_(h),
        variants_(variants), s_(t.first.stages), m_(w.size()) {}

  std::size_t components() const { return m_; }
  std::size_t stages() const { return s_; }

  Unknowns zeros() const {
    Unknowns u;
    u.x.resize(m_);
    u.y.resize(m_);
    u.k.resize(m_);
    for (std::size_t c = 0; c < m_; ++c) {
      const std::size_t n = w_[c].rows();
      u.x[c].assign(s_, Matrix(n, n));
      u.y[c].assign(s_, Matrix(n, n));
      u.k[c].assign(s_ * s_, Matrix(n, n));
    }
    return u;
  }

  // Wtilde_i = W + sum_j (a_ij X_j + ahat_ij (Y_j + K_ij)).
  std::vector<std::vector<Matrix>> wtilde(const Unknowns& u) const {
    std::vector<std::vector<Matrix>> wt(m_);
    for (std::size_t c = 0; c < m_; ++c) {
      wt[c].reserve(s_);
      for (std::size_t i = 0; i < s_; ++i) {
        Matrix v = w_[c];
        for (std::size_t j = 0; j < s_; ++j) {
          v.add_scaled(a_.coeff(i, j), u.x[c][j]);
          v.add_scaled(ahat_.coeff(i, j), u.y[c][j]);
          v.add_scaled(ahat_.coeff(i, j), u.k[c][i * s_ + j]);
        }
        wt[c].push_back(std::move(v));
      }
    }
    return wt;
  }

  // B at every stage, indexed [component][stage].
  std::vector<std::vector<Matrix>> evaluate_b(
      const std::vector<std::vector<Matrix>>& wt) const {
    std::vector<std::vector<Matrix>> b(m_);
    std::vector<Matrix> tuple(m_);
    for (std::size_t i = 0; i < s_; ++i) {
      for (std::size_t c = 0; c < m_; ++c) tuple[c] = wt[c][i];
      auto bi = flow_.evaluate_b(tuple);
      if (bi.size() != m_) {
        throw DimensionError("flow '" + flow_.name + "': B returned wrong component count");
      }
      for (std::size_t c = 0; c < m_; ++c) {
        if (bi[c].rows() != w_[c].rows() || !bi[c].is_square()) {
          throw DimensionError("flow '" + flow_.name + "': B has wrong shape");
        }
        b[c].push_back(std::move(bi[c]));
      }
    }
    return b;
  }

  // The fixed-point map: right-hand sides of the X, Y, K equations at u.
  // K_ij = h B_j sum_jp (a_i,jp X_jp + ahat_j,jp K_i,jp).
  Unknowns apply(const Unknowns& u) const {
    const auto b = evaluate_b(wtilde(u));
    Unknowns next;
    next.x.resize(m_);
    next.y.resize(m_);
    next.k.resize(m_);
    for (std::size_t c = 0; c < m_; ++c) {
      const std::size_t n = w_[c].rows();
      const SchemeVariant& v = variants_[c];
      for (std::size_t i = 0; i < s_; ++i) {
        const Matrix hb = h_ * b[c][i];
        Matrix left = w_[c];
        for (std::size_t j = 0; j < s_; ++j) left.add_scaled(a_.coeff(i, j), u.x[c][j]);
        next.x[c].push_back(-(left * hb));

        for (std::size_t j = 0; j < s_; ++j) {
          Matrix sum(n, n);
          for (std::size_t jp = 0; jp < s_; ++jp) {
            sum.add_scaled(a_.coeff(i, jp), u.x[c][jp]);
            sum.add_scaled(ahat_.coeff(j, jp), u.k[c][i * s_ + jp]);
          }
          next.k[c].push_back((h_ * b[c][j]) * sum);
        }

        if (!v.restricted()) {
          Matrix right = w_[c];
          for (std::size_t j = 0; j < s_; ++j)
            right.add_scaled(ahat_.coeff(i, j), u.y[c][j]);
          next.y[c].push_back(hb * right);
        }
      }
      if (v.restricted()) {
        const double sign = v.kind == VariantKind::kJQuadratic ? -1.0 : 1.0;
        for (std::size_t i = 0; i < s_; ++i)
          next.y[c].push_back(sign * v.j->twist(next.x[c][i]));
      }
    }
    return next;
  }

  // Max Frobenius norm of a - b over every unknown block.
  static double distance(const Unknowns& a, const Unknowns& b) {
    double r = 0.0;
    for (std::size_t c = 0; c < a.x.size(); ++c) {
      for (std::size_t i = 0; i < a.x[c].size(); ++i) {
        r = std::max(r, frobenius_norm(a.x[c][i] - b.x[c][i]));
        r = std::max(r, frobenius_norm(a.y[c][i] - b.y[c][i]));
      }
      for (std::size_t i = 0; i < a.k[c].size(); ++i)
        r = std::max(r, frobenius_norm(a.k[c][i] - b.k[c][i]));
    }
    return r;
  }

  // Real vectorization of the independent unknowns (Y omitted for the
  // restricted variants, where it is a function of X).
  std::vector<double> pack(const Unknowns& u) const {
    std::vector<double> v;
    auto put = [&v](const Matrix& mtx) {
      for (const Complex& z : mtx.data()) {
        v.push_back(z.real());
        v.push_back(z.imag());
      }
    };
    for (std::size_t c = 0; c < m_; ++c) {
      for (const auto& mtx : u.x[c]) put(mtx);
      if (!variants_[c].restricted())
        for (const auto& mtx : u.y[c]) put(mtx);
      for (const auto& mtx : u.k[c]) put(mtx);
    }
    return v;
  }

  Unknowns unpack(std::span<const double> v) const {
    Unknowns u = zeros();
    std::size_t pos = 0;
    auto get = [&v, &pos](Matrix& mtx) {
      for (Complex& z : mtx.data()) {
        z = Complex(v[pos], v[pos + 1]);
        pos += 2;
      }
    };
    for (std::size_t c = 0; c < m_; ++c) {
      for (auto& mtx : u.x[c]) get(mtx);
      if (!variants_[c].restricted()) {
        for (auto& mtx : u.y[c]) get(mtx);
      } else {
        const double sign = variants_[c].kind == VariantKind::kJQuadratic ? -1.0 : 1.0;
        for (std::size_t i = 0; i < s_; ++i)
          u.y[c][i] = sign * variants_[c].j->twist(u.x[c][i]);
      }
      for (auto& mtx : u.k[c]) get(mtx);
    }
    return u;
  }

 private:
  const ProductFlowDefinition& flow_;
  const ButcherTableau& a_;
  const ButcherTableau& ahat_;
  std::span<const Matrix> w_;
  double h_;
  std::span<const SchemeVariant> variants_;
  std::size_t s_;
  std::size_t m_;
};

struct SolveResult {
  Unknowns u;
  std::size_t iterations = 0;
  double residual = 0.0;
};

SolveResult fixed_point(const StageSystem& sys, const SolverConfig& cfg,
                        Unknowns start, std::size_t used = 0) {
  Unknowns u = std::move(start);
  double residual = 0.0;
  for (std::size_t it = used + 1; it <= cfg.max_iter + used; ++it) {
    Unknowns next = sys.apply(u);
    residual = StageSystem::distance(next, u);
    u = std::move(next);
    if (!std::isfinite(residual)) break;
    if (residual <= cfg.abs_tol) {
      if (cfg.refine) {
        while (it < cfg.max_iter + used && residual > 0.0) {
          Unknowns more = sys.apply(u);
          const double r = StageSystem::distance(more, u);
          if (!(r < 0.5 * residual)) break;
          u = std::move(more);
          residual = r;
          ++it;
        }
      }
      return {std::move(u), it, residual};
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "stage solver: no convergence in %zu iterations (residual %.3e, tol %.3e)",
                cfg.max_iter, residual, cfg.abs_tol);
  throw ConvergenceError(buf, residual, cfg.max_iter);
}

// Newton on F(u) = u - G(u) with a forward-difference Jacobian. Returns
// nullopt when the linear system is singular.
std::optional<SolveResult> newton(const StageSystem& sys, const SolverConfig& cfg) {
  Unknowns u = sys.zeros();
  std::vector<double> x = sys.pack(u);
  const std::size_t dim = x.size();
  double residual = 0.0;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    const Unknowns gu = sys.apply(sys.unpack(x));
    std::vector<double> g = sys.pack(gu);
    residual = StageSystem::distance(gu, sys.unpack(x));
    if (!std::isfinite(residual)) break;
    if (residual <= cfg.abs_tol) return SolveResult{gu, it, residual};

    std::vector<double> f(dim);
    for (std::size_t r = 0; r < dim; ++r) f[r] = x[r] - g[r];
    std::vector<double> jac(dim * dim);
    for (std::size_t col = 0; col < dim; ++col) {
      const double step = 1e-7 * std::max(1.0, std::abs(x[col]));
      std::vector<double> xp = x;
      xp[col] += step;
      const std::vector<double> gp = sys.pack(sys.apply(sys.unpack(xp)));
      for (std::size_t r = 0; r < dim; ++r) {
        const double fp = xp[r] - gp[r];
        jac[r * dim + col] = (fp - f[r]) / step;
      }
    }
    if (!solve_real_system(jac, f, dim)) return std::nullopt;
    for (std::size_t r = 0; r < dim; ++r) x[r] -= f[r];
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "stage solver (newton): no convergence in %zu iterations (residual %.3e)",
                cfg.max_iter, residual);
  throw ConvergenceError(buf, residual, cfg.max_iter);
}

std::vector<SchemeVariant> resolve_variants(const ProductFlowDefinition& flow,
                                            std::span<const SchemeVariant> given) {
  std::vector<SchemeVariant> v;
  if (given.empty()) {
    for (const auto& c : flow.components)
      v.push_back(SchemeVariant::natural_for(c.subspace, c.dimension));
    return v;
  }
  if (given.size() == 1) return std::vector<SchemeVariant>(flow.size(), given[0]);
  if (given.size() != flow.size()) {
    throw ConfigurationError("scheme: need one variant per component");
  }
  return {given.begin(), given.end()};
}

void check_inputs(const ProductFlowDefinition& flow, const PartitionedTableau& t,
                  std::span<const Matrix> w, double h,
                  std::span<const SchemeVariant> variants, const SolverConfig& cfg) {
  t.first.validate_shape();
  t.second.validate_shape();
  if (t.first.stages != t.second.stages) {
    throw ConfigurationError("partitioned tableau: stage counts differ");
  }
  cfg.validate();
  if (!(h >= 0.0) || !std::isfinite(h)) throw ConfigurationError("step size must be >= 0");
  if (w.size() != flow.size()) {
    throw DimensionError("flow '" + flow.name + "': expected " +
                         std::to_string(flow.size()) + " components, got " +
                         std::to_string(w.size()));
  }
  for (std::size_t c = 0; c < w.size(); ++c) {
    const auto& comp = flow.components[c];
    if (!w[c].is_square() || w[c].rows() != comp.dimension) {
      throw DimensionError("flow '" + flow.name + "': component " + std::to_string(c) +
                           " must be " + std::to_string(comp.dimension) + "x" +
                           std::to_string(comp.dimension));
    }
    const SchemeVariant& v = variants[c];
    if (v.restricted()) {
      if (!v.j || v.j->j.rows() != comp.dimension) {
        throw ConfigurationError("variant " + v.describe() + ": J has the wrong dimension");
      }
      const double r = comp.subspace.membership_residual(w[c]);
      if (r > 1e-10) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "component %zu is not in subspace %s (residual %.3e)", c,
                      comp.subspace.describe().c_str(), r);
        throw ConfigurationError(buf);
      }
    }
  }
}

Matrix update(const Matrix& w, const StageSet& st, const ButcherTableau& t,
              const SchemeVariant& v, double h) {
  Matrix next = w;
  if (!v.restricted()) {
    for (std::size_t i = 0; i < st.stages; ++i)
      next.add_scaled(h * t.b[i], commutator(st.b[i], st.wtilde[i]));
    return next;
  }
  const double sign = v.kind == VariantKind::kJQuadratic ? -1.0 : 1.0;
  for (std::size_t i = 0; i < st.stages; ++i) {
    Matrix d = st.x[i] + st.kij(i, i);
    next.add_scaled(t.b[i], d);
    next.add_scaled(sign * t.b[i], v.j->twist(d));
  }
  return next;
}

}  // namespace

ProductStageSet solve_product_stages(const ProductFlowDefinition& flow,
                                     const PartitionedTableau& t,
                                     std::span<const Matrix> w, double h,
                                     std::span<const SchemeVariant> variants,
                                     const SolverConfig& cfg) {
  const auto vars = resolve_variants(flow, variants);
  check_inputs(flow, t, w, h, vars, cfg);
  StageSystem sys(flow, t, w, h, vars);

  SolveResult res;
  bool fallback = false;
  if (cfg.method == SolverMethod::kNewton) {
    auto r = newton(sys, cfg);
    if (r) {
      res = std::move(*r);
    } else {
      fallback = true;
      res = fixed_point(sys, cfg, sys.zeros());
    }
  } else {
    res = fixed_point(sys, cfg, sys.zeros());
  }

  const auto wt = sys.wtilde(res.u);
  const auto b = sys.evaluate_b(wt);
  ProductStageSet out;
  out.iterations = res.iterations;
  out.residual = res.residual;
  out.newton_fallback = fallback;
  for (std::size_t c = 0; c < sys.components(); ++c) {
    StageSet st;
    st.stages = sys.stages();
    st.x = std::move(res.u.x[c]);
    st.y = std::move(res.u.y[c]);
    st.k = std::move(res.u.k[c]);
    st.wtilde = wt[c];
    st.b = b[c];
    st.iterations = res.iterations;
    st.residual = res.residual;
    st.newton_fallback = fallback;
    out.components.push_back(std::move(st));
  }
  return out;
}

StageSet solve_stages(const FlowDefinition& flow, const ButcherTableau& t,
                      const Matrix& w, double h, const SchemeVariant& variant,
                      const SolverConfig& cfg) {
  const ProductFlowDefinition p = as_product(flow);
  const PartitionedTableau pt{t, t};
  return std::move(
      solve_product_stages(p, pt, std::span<const Matrix>(&w, 1), h,
                           std::span<const SchemeVariant>(&variant, 1), cfg)
          .components.front());
}

std::vector<Matrix> product_step(const ProductFlowDefinition& flow,
                                 const PartitionedTableau& t,
                                 std::span<const Matrix> w, double h,
                                 const SolverConfig& cfg,
                                 std::span<const SchemeVariant> variants,
                                 ProductStageSet* stages) {
  const auto vars = resolve_variants(flow, variants);
  ProductStageSet st = solve_product_stages(flow, t, w, h, vars, cfg);
  std::vector<Matrix> next;
  next.reserve(w.size());
  for (std::size_t c = 0; c < w.size(); ++c)
    next.push_back(update(w[c], st.components[c], t.first, vars[c], h));
  if (stages) *stages = std::move(st);
  return next;
}

std::vector<Matrix> product_step(const ProductFlowDefinition& flow,
                                 const ButcherTableau& t,
                                 std::span<const Matrix> w, double h,
                                 const SolverConfig& cfg,
                                 std::span<const SchemeVariant> variants) {
  return product_step(flow, PartitionedTableau{t, t}, w, h, cfg, variants, nullptr);
}

Matrix isosyrk_step(const FlowDefinition& flow, const ButcherTableau& t,
                    const Matrix& w, double h, const SchemeVariant& variant,
                    const SolverConfig& cfg) {
  const ProductFlowDefinition p = as_product(flow);
  return std::move(product_step(p, PartitionedTableau{t, t},
                                std::span<const Matrix>(&w, 1), h, cfg,
                                std::span<const SchemeVariant>(&variant, 1), nullptr)
                       .front());
}

namespace {

void check_partitioned(const PartitionedTableau& pt,
                       const std::vector<ProductComponent>& components) {
  const double r = check_partitioned_symplectic(pt);
  if (r > 1e-12) {
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "partitioned tableau is not symplectic (residual %.3e)", r);
    throw ConfigurationError(buf);
  }
  if (pt.coincide()) return;
  for (const auto& c : components) {
    if (c.subspace.quadratic_constraint(c.dimension)) {
      throw ConfigurationError(
          "partitioned scheme on a J-quadratic or complement subspace (" +
          c.subspace.describe() + ") requires coinciding tableaux");
    }
  }
}

}  // namespace

Matrix isosyprk_step(const FlowDefinition& flow, const PartitionedTableau& pt,
                     const Matrix& w, double h, const SolverConfig& cfg) {
  const ProductFlowDefinition p = as_product(flow);
  check_partitioned(pt, p.components);
  const SchemeVariant general = SchemeVariant::general();
  return std::move(product_step(p, pt, std::span<const Matrix>(&w, 1), h, cfg,
                                std::span<const SchemeVariant>(&general, 1), nullptr)
                       .front());
}

Scheme Scheme::isosyrk(ButcherTableau t, std::optional<SchemeVariant> v) {
  Scheme s;
  s.tableau = PartitionedTableau{t, t};
  s.variant = std::move(v);
  return s;
}

Scheme Scheme::isosyprk(PartitionedTableau pt) {
  Scheme s;
  s.tableau = std::move(pt);
  s.partitioned = true;
  s.variant = SchemeVariant::general();
  return s;
}

const MonitorSeries* TrajectoryRecord::find(std::string_view group,
                                            std::string_view name) const {
  for (const auto& m : monitors)
    if (m.group == group && m.name == name) return &m;
  return nullptr;
}

std::vector<std::string> known_monitors() {
  return {kMonitorCasimir, kMonitorHamiltonian, kMonitorSubspace, kMonitorIterations,
          kMonitorMomentum};
}

namespace {

class MonitorSet {
 public:
  MonitorSet(const ProductFlowDefinition& flow, const IntegrationOptions& opt)
      : flow_(flow), pmax_(opt.pmax) {
    for (const auto& name : opt.monitors) {
      const auto known = known_monitors();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw ConfigurationError("unknown monitor '" + name + "'");
      }
      if (name == kMonitorHamiltonian && !flow.has_hamiltonian()) {
        throw ConfigurationError("monitor 'hamiltonian': flow '" + flow.name +
                                 "' has no Hamiltonian");
      }
      if (name == kMonitorMomentum && !flow.has_momentum()) {
        throw ConfigurationError("monitor 'momentum': flow '" + flow.name +
                                 "' has no momentum map");
      }
      if (std::find(groups_.begin(), groups_.end(), name) == groups_.end())
        groups_.push_back(name);
    }
  }

  void record(TrajectoryRecord& tr, std::span<const Matrix> w, double iterations) {
    std::size_t slot = 0;
    auto push = [&](const std::string& group, const std::string& name, double v) {
      if (slot == tr.monitors.size()) tr.monitors.push_back({group, name, {}});
      tr.monitors[slot++].values.push_back(v);
    };
    for (const auto& g : groups_) {
      if (g == kMonitorCasimir) {
        for (std::size_t c = 0; c < w.size(); ++c) {
          const std::size_t pmax = std::min(pmax_, std::max<std::size_t>(w[c].rows(), 1));
          const auto tp = trace_powers(w[c], pmax);
          for (std::size_t p = 0; p < tp.size(); ++p) {
            const std::string base = (w.size() > 1 ? "c" + std::to_string(c) + "_" : "") +
                                     "tr" + std::to_string(p + 1);
            push(g, base + "_re", tp[p].real());
            push(g, base + "_im", tp[p].imag());
          }
        }
      } else if (g == kMonitorHamiltonian) {
        push(g, "H", flow_.evaluate_hamiltonian(w));
      } else if (g == kMonitorSubspace) {
        push(g, "residual", flow_.membership_residual(w));
      } else if (g == kMonitorIterations) {
        push(g, "iterations", iterations);
      } else if (g == kMonitorMomentum) {
        const Matrix mom = flow_.momentum(w);
        for (std::size_t i = 0; i < mom.rows(); ++i)
          for (std::size_t j = 0; j < mom.cols(); ++j) {
            const std::string base = "M" + std::to_string(i) + std::to_string(j);
            push(g, base + "_re", mom(i, j).real());
            push(g, base + "_im", mom(i, j).imag());
          }
      }
    }
  }

 private:
  const ProductFlowDefinition& flow_;
  std::size_t pmax_;
  std::vector<std::string> groups_;
};

}  // namespace

TrajectoryRecord integrate(const ProductFlowDefinition& flow, const Scheme& scheme,
                           std::span<const Matrix> w0, double h,
                           const IntegrationOptions& options) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigurationError("h must be positive");
  if (options.stride < 1) throw ConfigurationError("stride must be at least 1");
  options.solver.validate();

  TrajectoryRecord tr;
  tr.h = h;
  tr.stride = options.stride;

  if (w0.size() != flow.size()) {
    throw DimensionError("initial state: expected " + std::to_string(flow.size()) +
                         " components, got " + std::to_string(w0.size()));
  }
  for (std::size_t c = 0; c < w0.size(); ++c) {
    const double r = flow.components[c].subspace.membership_residual(w0[c]);
    if (r > 1e-10) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "initial state component %zu is not in subspace %s (residual %.3e)",
                    c, flow.components[c].subspace.describe().c_str(), r);
      throw ConfigurationError(buf);
    }
  }

  if (scheme.partitioned) {
    check_partitioned(scheme.tableau, flow.components);
  } else {
    const double r = check_symplectic(scheme.tableau.first);
    if (r > 1e-12) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "tableau '%s' is not symplectic (residual %.3e); steps will not "
                    "preserve the Lie-Poisson structure",
                    scheme.tableau.first.name.c_str(), r);
      tr.warnings.emplace_back(buf);
    }
  }

  std::vector<SchemeVariant> variants;
  if (scheme.variant) {
    variants.assign(flow.size(), *scheme.variant);
  } else {
    for (const auto& c : flow.components)
      variants.push_back(SchemeVariant::natural_for(c.subspace, c.dimension));
  }

  MonitorSet monitors(flow, options);
  std::vector<Matrix> w(w0.begin(), w0.end());
  tr.times.push_back(0.0);
  tr.states.push_back(w);
  monitors.record(tr, w, 0.0);

  bool warned_fallback = false;
  for (std::size_t k = 0; k < options.nsteps; ++k) {
    ProductStageSet st;
    try {
      w = product_step(flow, scheme.tableau, w, h, options.solver, variants, &st);
    } catch (const ConvergenceError& e) {
      if (k == 0) {
        throw ConvergenceError("step 0: " + std::string(e.what()), e.last_residual(),
                               e.iterations());
      }
      tr.complete = false;
      tr.failed_step = k;
      tr.failure = "step " + std::to_string(k) + ": " + e.what();
      break;
    } catch (const SingularityError& e) {
      if (k == 0) throw SingularityError("step 0: " + std::string(e.what()));
      tr.complete = false;
      tr.failed_step = k;
      tr.failure = "step " + std::to_string(k) + ": " + e.what();
      break;
    }
    if (st.newton_fallback && !warned_fallback) {
      tr.warnings.push_back("step " + std::to_string(k) +
                            ": singular Newton system, fell back to fixed-point iteration");
      warned_fallback = true;
    }
    if ((k + 1) % options.stride == 0) {
      tr.times.push_back(static_cast<double>(k + 1) * h);
      tr.states.push_back(w);
      monitors.record(tr, w, static_cast<double>(st.iterations));
    }
  }
  return tr;
}

TrajectoryRecord integrate(const FlowDefinition& flow, const Scheme& scheme,
                           const Matrix& w0, double h, const IntegrationOptions& options) {
  return integrate(as_product(flow), scheme, std::span<const Matrix>(&w0, 1), h, options);
}

}  // namespace isoflow
