#pragma once

// Reproducible random initial data.
//
// std::normal_distribution is implementation-defined, so seeded experiments
// would differ between standard libraries. This stream is SplitMix64 mapped
// to uniforms on (0, 1) with 53-bit resolution, and to standard normals by
// the Box-Muller transform (both outputs of each pair are used).

#include <cstdint>
#include <optional>

#include "isoflow/linalg.hpp"

namespace isoflow {

class SplitMixNormal {
 public:
  explicit SplitMixNormal(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();   // in (0, 1)
  double normal();

 private:
  std::uint64_t state_;
  std::optional<double> cached_;
};

// Entries i.i.d. standard normal (real and imaginary parts when complex).
Matrix random_matrix(SplitMixNormal& rng, std::size_t n, bool complex_entries);

// (G + G^dagger) / 2 with G from random_matrix, times scale.
Matrix random_hermitian(SplitMixNormal& rng, std::size_t n, double scale = 1.0);

}  // namespace isoflow
