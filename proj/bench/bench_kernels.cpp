#include <benchmark/benchmark.h>

#include <omp.h>

#include <random>

#include "dwym/dynamics.hpp"
#include "dwym/hamiltonian.hpp"
#include "dwym/noether.hpp"
#include "dwym/reference.hpp"

using namespace dwym;

namespace {

// args: sites per axis, N; 3D space-time
GaugeFieldState bench_state(const benchmark::State& b) {
  const int sites = static_cast<int>(b.range(0));
  const int n = static_cast<int>(b.range(1));
  GaugeFieldState st = new_state(LatticeSpec::spacetime(3, sites, 0.1), {n, 0.5, 1.0});
  std::mt19937_64 rng(1);
  seed_uniform_random(st, rng, 1.0);
  return st;
}

void set_counters(benchmark::State& b, std::size_t sites) {
  b.SetItemsProcessed(static_cast<std::int64_t>(b.iterations() * sites));
  b.counters["threads"] = omp_get_max_threads();
}

void BM_EvalYm(benchmark::State& b) {
  const GaugeFieldState st = bench_state(b);
  for (auto _ : b) benchmark::DoNotOptimize(eval_ym(st, st.params()));
  set_counters(b, st.sites());
}

void BM_EvalYmReference(benchmark::State& b) {
  const GaugeFieldState st = bench_state(b);
  for (auto _ : b) benchmark::DoNotOptimize(reference::eval_ym(st, st.params()));
  set_counters(b, st.sites());
}

void BM_GaugeCurrent(benchmark::State& b) {
  const GaugeFieldState st = bench_state(b);
  for (auto _ : b) benchmark::DoNotOptimize(sun_gauge_current(st, st.params()));
  set_counters(b, st.sites());
}

void BM_GaugeCurrentReference(benchmark::State& b) {
  const GaugeFieldState st = bench_state(b);
  for (auto _ : b) benchmark::DoNotOptimize(reference::sun_gauge_current(st, st.params()));
  set_counters(b, st.sites());
}

void BM_Step(benchmark::State& b) {
  const ModelParams params{static_cast<int>(b.range(1)), 0.5, 1.0};
  const int sites = static_cast<int>(b.range(0));
  const double dx = 0.1;
  std::mt19937_64 rng(2);
  GaugeFieldState st = coupled_initial_state(LatticeSpec::slice(2, sites, dx, 0.25 * dx), params, rng);
  for (auto _ : b) {
    step(st, 0.25 * dx, params);
    benchmark::ClobberMemory();
  }
  set_counters(b, st.sites());
}

void shapes(benchmark::internal::Benchmark* b) {
  for (int n : {1, 2, 3})
    for (int sites : {16, 32}) b->Args({sites, n});
  b->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_EvalYm)->Apply(shapes);
BENCHMARK(BM_EvalYmReference)->Apply(shapes);
BENCHMARK(BM_GaugeCurrent)->Apply(shapes);
BENCHMARK(BM_GaugeCurrentReference)->Apply(shapes);
BENCHMARK(BM_Step)->Args({4096, 1})->Args({4096, 2})->Args({65536, 1})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
