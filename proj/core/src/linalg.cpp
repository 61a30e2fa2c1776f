#include "isoflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "isoflow/errors.hpp"

namespace isoflow {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw DimensionError("matrix literal has ragged rows");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const Complex> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "matrix addition");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "matrix subtraction");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(Complex s) {
  for (auto& x : data_) x *= s;
  return *this;
}

Matrix& Matrix::add_scaled(Complex s, const Matrix& other) {
  require_same_shape(*this, other, "scaled addition");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * other.data_[k];
  return *this;
}

void Matrix::set_zero() { std::fill(data_.begin(), data_.end(), Complex{}); }

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(Complex s, Matrix a) { return a *= s; }
Matrix operator*(Matrix a, Complex s) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matrix product: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " times " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  Matrix c(a.rows(), b.cols());
  const std::size_t n = a.rows(), m = a.cols(), p = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < p; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  require_square(a, "commutator");
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

Matrix conj_transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix real_part(const Matrix& a) {
  Matrix r(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) r.data()[k] = a.data()[k].real();
  return r;
}

Complex frobenius_inner(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "frobenius inner product");
  Complex s{};
  for (std::size_t k = 0; k < a.size(); ++k)
    s += std::conj(a.data()[k]) * b.data()[k];
  return s;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (const auto& x : a.data()) s += std::norm(x);
  return std::sqrt(s);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (const auto& x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

Complex trace(const Matrix& a) {
  require_square(a, "trace");
  Complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

std::vector<Complex> trace_powers(const Matrix& w, std::size_t pmax) {
  require_square(w, "trace_powers");
  std::vector<Complex> out;
  out.reserve(pmax);
  if (pmax == 0) return out;
  Matrix power = w;
  out.push_back(trace(power));
  for (std::size_t p = 2; p <= pmax; ++p) {
    power = power * w;
    out.push_back(trace(power));
  }
  return out;
}

namespace {

// Reduces h to upper Hessenberg form by Householder reflections.
void reduce_to_hessenberg(Matrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const Complex x0 = h(k + 1, k);
    const Complex phase = std::abs(x0) == 0.0 ? Complex{1.0} : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = h(i, k);
      if (i == k + 1) v[i] -= alpha;
      vnorm += std::norm(v[i]);
    }
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;
    // h <- (I - 2vv^dagger) h
    for (std::size_t j = 0; j < n; ++j) {
      Complex dot{};
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= 2.0 * v[i] * dot;
    }
    // h <- h (I - 2vv^dagger)
    for (std::size_t i = 0; i < n; ++i) {
      Complex dot{};
      for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= 2.0 * dot * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

struct Rotation {
  double c;
  Complex s;
};

// Rotation G with G [x; y] = [r; 0].
Rotation make_rotation(Complex x, Complex y) {
  const double ax = std::abs(x), ay = std::abs(y);
  if (ay == 0.0) return {1.0, Complex{}};
  if (ax == 0.0) return {0.0, Complex{1.0} * std::conj(y) / ay};
  const double r = std::hypot(ax, ay);
  return {ax / r, (x / ax) * std::conj(y) / r};
}

// Shifted QR sweeps on the Hessenberg matrix; eigenvalues end on the diagonal.
void hessenberg_qr(Matrix& h) {
  const std::size_t n = h.rows();
  if (n == 0) return;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(max_abs(h), std::numeric_limits<double>::min());
  const std::size_t max_total = 100 * n + 100;
  std::size_t total = 0;
  std::size_t since_deflation = 0;
  std::vector<Rotation> rot(n);

  std::size_t hi = n - 1;
  while (hi > 0) {
    std::size_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      const double diag = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (sub <= eps * (diag > 0.0 ? diag : scale)) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++total > max_total) {
      throw ConvergenceError("eigenvalues: QR iteration did not converge",
                             std::abs(h(hi, hi - 1)), total);
    }
    ++since_deflation;

    Complex mu;
    if (since_deflation % 11 == 10) {
      // Exceptional shift to break cycles.
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      const Complex a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
      const Complex c = h(hi, hi - 1), d = h(hi, hi);
      const Complex half = 0.5 * (a - d);
      const Complex disc = std::sqrt(half * half + b * c);
      const Complex m1 = 0.5 * (a + d) + disc, m2 = 0.5 * (a + d) - disc;
      mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
    }

    for (std::size_t k = lo; k <= hi; ++k) h(k, k) -= mu;
    for (std::size_t k = lo; k < hi; ++k) {
      rot[k] = make_rotation(h(k, k), h(k + 1, k));
      const auto [c, s] = rot[k];
      for (std::size_t j = k; j <= hi; ++j) {
        const Complex u = h(k, j), v = h(k + 1, j);
        h(k, j) = c * u + s * v;
        h(k + 1, j) = -std::conj(s) * u + c * v;
      }
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const auto [c, s] = rot[k];
      const std::size_t last = std::min(k + 2, hi);
      for (std::size_t i = lo; i <= last; ++i) {
        const Complex u = h(i, k), v = h(i, k + 1);
        h(i, k) = u * c + v * std::conj(s);
        h(i, k + 1) = -u * s + v * c;
      }
    }
    for (std::size_t k = lo; k <= hi; ++k) h(k, k) += mu;
  }
}

}  // namespace

std::vector<Complex> eigenvalues(const Matrix& w) {
  require_square(w, "eigenvalues");
  Matrix h = w;
  reduce_to_hessenberg(h);
  hessenberg_qr(h);
  std::vector<Complex> ev(h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i) ev[i] = h(i, i);

  // Sort by real part, then order runs of numerically equal real parts by
  // imaginary part so conjugate pairs compare stably.
  std::sort(ev.begin(), ev.end(),
            [](Complex a, Complex b) { return a.real() < b.real(); });
  double mag = 0.0;
  for (auto z : ev) mag = std::max(mag, std::abs(z));
  const double tol = 1e-9 * std::max(1.0, mag);
  std::size_t start = 0;
  for (std::size_t i = 1; i <= ev.size(); ++i) {
    if (i == ev.size() || ev[i].real() - ev[i - 1].real() > tol) {
      std::sort(ev.begin() + static_cast<std::ptrdiff_t>(start),
                ev.begin() + static_cast<std::ptrdiff_t>(i),
                [](Complex a, Complex b) { return a.imag() < b.imag(); });
      start = i;
    }
  }
  return ev;
}

Matrix inverse(const Matrix& a) {
  require_square(a, "inverse");
  const std::size_t n = a.rows();
  Matrix lu = a;
  Matrix inv = Matrix::identity(n);
  const double scale = max_abs(a);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (std::abs(lu(piv, k)) <= 1e-14 * scale || scale == 0.0) {
      throw ConfigurationError("inverse: matrix is singular");
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(lu(k, j), lu(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    }
    const Complex d = 1.0 / lu(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      lu(k, j) *= d;
      inv(k, j) *= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const Complex f = lu(i, k);
      if (f == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) {
        lu(i, j) -= f * lu(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

bool solve_real_system(std::vector<double>& m, std::vector<double>& rhs,
                       std::size_t n, double pivot_tol) {
  double scale = 0.0;
  for (double x : m) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return false;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m[i * n + k]) > std::abs(m[piv * n + k])) piv = i;
    if (std::abs(m[piv * n + k]) <= pivot_tol * scale) return false;
    if (piv != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
      std::swap(rhs[k], rhs[piv]);
    }
    const double inv = 1.0 / m[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i * n + k] * inv;
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
      rhs[i] -= f * rhs[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = rhs[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= m[k * n + j] * rhs[j];
    rhs[k] = s / m[k * n + k];
  }
  return true;
}

void require_square(const Matrix& a, const char* what) {
  if (!a.is_square()) {
    throw DimensionError(std::string(what) + ": matrix is " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

}  // namespace isoflow
