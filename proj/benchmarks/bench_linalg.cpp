#include <benchmark/benchmark.h>

#include "isoflow/linalg.hpp"
#include "isoflow/random.hpp"

using namespace isoflow;

static void BM_TracePowers(benchmark::State& state) {
  SplitMixNormal rng(7);
  const Matrix w = random_matrix(rng, static_cast<std::size_t>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(trace_powers(w, 6));
}
BENCHMARK(BM_TracePowers)->RangeMultiplier(2)->Range(4, 32);

static void BM_Eigenvalues(benchmark::State& state) {
  SplitMixNormal rng(7);
  const Matrix w = random_matrix(rng, static_cast<std::size_t>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(w));
}
BENCHMARK(BM_Eigenvalues)->RangeMultiplier(2)->Range(4, 32);

static void BM_Commutator(benchmark::State& state) {
  SplitMixNormal rng(7);
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(rng, n, true), b = random_matrix(rng, n, true);
  for (auto _ : state) benchmark::DoNotOptimize(commutator(a, b));
}
BENCHMARK(BM_Commutator)->RangeMultiplier(2)->Range(4, 32);
