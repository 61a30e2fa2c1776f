#include <benchmark/benchmark.h>

#include "isoflow/flows.hpp"
#include "isoflow/integrators.hpp"

using namespace isoflow;

// One IsoSyRK step on the rigid body so(10); argument is the stage count.
static void BM_RigidBodyStep(benchmark::State& state) {
  const auto p = make_preset("rigid-body-10");
  const auto& f = std::get<FlowDefinition>(p.flow);
  const auto t = gauss_legendre(static_cast<std::size_t>(state.range(0)));
  const auto v = SchemeVariant::natural_for(f.subspace, f.dimension);
  Matrix w = p.initial[0];
  for (auto _ : state) {
    w = isosyrk_step(f, t, w, 0.1, v);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_RigidBodyStep)->DenseRange(1, 3);

static void BM_RigidBodyStepNewton(benchmark::State& state) {
  const auto p = make_preset("rigid-body-10");
  const auto& f = std::get<FlowDefinition>(p.flow);
  const auto t = gauss_legendre(static_cast<std::size_t>(state.range(0)));
  SolverConfig cfg;
  cfg.method = SolverMethod::kNewton;
  const auto v = SchemeVariant::natural_for(f.subspace, f.dimension);
  Matrix w = p.initial[0];
  for (auto _ : state) {
    w = isosyrk_step(f, t, w, 0.1, v, cfg);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_RigidBodyStepNewton)->DenseRange(1, 2);

static void BM_VortexStep(benchmark::State& state) {
  const auto p = make_preset("vortices-4");
  const auto flow = point_vortex_flow({1.0, 2.0, 3.0, 4.0});
  const auto t = gauss_legendre(static_cast<std::size_t>(state.range(0)));
  std::vector<Matrix> w = p.initial;
  for (auto _ : state) {
    w = product_step(flow, t, w, 0.1);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_VortexStep)->DenseRange(1, 3);

static void BM_Integrate(benchmark::State& state) {
  const auto p = make_preset("toda-4");
  IntegrationOptions opt;
  opt.nsteps = 1000;
  for (auto _ : state) {
    auto tr = integrate(p.system(), Scheme::isosyrk(gauss_legendre(1)), p.initial, 0.1, opt);
    benchmark::DoNotOptimize(tr);
  }
}
BENCHMARK(BM_Integrate)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
