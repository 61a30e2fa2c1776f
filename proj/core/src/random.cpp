#include "isoflow/random.hpp"

#include <cmath>
#include <numbers>

namespace isoflow {

std::uint64_t SplitMixNormal::next_u64() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMixNormal::uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  const std::uint64_t k = next_u64() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double SplitMixNormal::normal() {
  if (cached_) {
    const double z = *cached_;
    cached_.reset();
    return z;
  }
  const double u1 = uniform(), u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(theta);
  return r * std::cos(theta);
}

Matrix random_matrix(SplitMixNormal& rng, std::size_t n, bool complex_entries) {
  Matrix m(n, n);
  for (auto& x : m.data()) {
    const double re = rng.normal();
    const double im = complex_entries ? rng.normal() : 0.0;
    x = Complex(re, im);
  }
  return m;
}

Matrix random_hermitian(SplitMixNormal& rng, std::size_t n, double scale) {
  Matrix g = random_matrix(rng, n, true);
  Matrix h = g + conj_transpose(g);
  h *= 0.5 * scale;
  return h;
}

}  // namespace isoflow
