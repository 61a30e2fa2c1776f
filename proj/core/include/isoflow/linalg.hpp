#pragma once

// Dense complex matrices and the spectral/trace primitives used throughout.
//
// Storage is row-major and dense. All operations are pure; nothing here
// allocates shared state, so values may be used from independent threads.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace isoflow {

using Complex = std::complex<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);

  // Row-wise literal: Matrix{{1, 2}, {3, 4}}.
  Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static Matrix zeros(std::size_t n) { return Matrix(n, n); }
  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const Complex> d);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Complex s);

  // this += s * other, without a temporary.
  Matrix& add_scaled(Complex s, const Matrix& other);

  void set_zero();

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(Complex s, Matrix a);
Matrix operator*(Matrix a, Complex s);
Matrix operator*(const Matrix& a, const Matrix& b);

// [a, b] = ab - ba.
Matrix commutator(const Matrix& a, const Matrix& b);

Matrix conj_transpose(const Matrix& a);
Matrix transpose(const Matrix& a);
Matrix real_part(const Matrix& a);

// <a, b> = Tr(a^dagger b).
Complex frobenius_inner(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);

// Largest entrywise modulus of a - b.
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs(const Matrix& a);

Complex trace(const Matrix& a);

// Entry p-1 holds Tr(W^p), p = 1..pmax, by repeated multiplication.
std::vector<Complex> trace_powers(const Matrix& w, std::size_t pmax);

// Eigenvalues by Hessenberg reduction and shifted complex QR, sorted
// lexicographically by (real, imag). Throws ConvergenceError past the
// iteration cap.
std::vector<Complex> eigenvalues(const Matrix& w);

// LU with partial pivoting. Throws ConfigurationError on a singular matrix.
Matrix inverse(const Matrix& a);

// Solves the real dense system m x = rhs (m is n x n row-major) in place.
// Returns false when a pivot falls below pivot_tol * max|m|.
bool solve_real_system(std::vector<double>& m, std::vector<double>& rhs,
                       std::size_t n, double pivot_tol = 1e-14);

void require_square(const Matrix& a, const char* what);
void require_same_shape(const Matrix& a, const Matrix& b, const char* what);

}  // namespace isoflow
