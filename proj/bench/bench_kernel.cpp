// Serial vs OpenMP kernel assembly and application.

#include <benchmark/benchmark.h>

#include "nonholo/kernel_assembly.hpp"
#include "nonholo/propagator.hpp"

using namespace nonholo;

namespace {

Manifold ring() { return RingManifold{1.0, 512}; }
Manifold sphere() { return SphereManifold{1.0, 32, 64}; }

ShortTimeConfig config() {
  ShortTimeConfig c;
  c.epsilon = 0.04;
  return c;
}

void BM_Build(benchmark::State& state, Manifold m, Execution exec) {
  for (auto _ : state) benchmark::DoNotOptimize(build_propagator(m, config(), MeasureMode::QEP, default_tolerances(), exec));
}

void BM_Apply(benchmark::State& state, Manifold m, Execution exec) {
  const auto p = build_propagator(m, config(), MeasureMode::QEP);
  const Vec v = Vec::Ones(p.size());
  for (auto _ : state) benchmark::DoNotOptimize(p.apply(v, exec));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Build, ring_serial, ring(), Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Build, ring_parallel, ring(), Execution::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Build, sphere_serial, sphere(), Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Build, sphere_parallel, sphere(), Execution::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Apply, ring_serial, ring(), Execution::Serial);
BENCHMARK_CAPTURE(BM_Apply, ring_parallel, ring(), Execution::Parallel);
BENCHMARK_CAPTURE(BM_Apply, sphere_serial, sphere(), Execution::Serial);
BENCHMARK_CAPTURE(BM_Apply, sphere_parallel, sphere(), Execution::Parallel);

BENCHMARK_MAIN();
