// Serial reference vs OpenMP kernels for the three samplers.
#include <benchmark/benchmark.h>

#include "embed/sim.hpp"
#include "embed/solve.hpp"

namespace {

using namespace embed;

const StoppingRule& rule() {
  static const StoppingRule r =
      solve(target::double_exponential(1, 1), charm::make("brownian_extrema", {})).rule;
  return r;
}

void exact_serial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(sample_exact_serial(rule(), 1, s.range(0)));
  s.SetItemsProcessed(s.iterations() * s.range(0));
}

void exact_omp(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(sample_exact(rule(), 1, s.range(0)));
  s.SetItemsProcessed(s.iterations() * s.range(0));
}

void ppp_serial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(sample_ppp_serial(rule(), 1, s.range(0), 1e-3));
  s.SetItemsProcessed(s.iterations() * s.range(0));
}

void ppp_omp(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(sample_ppp(rule(), 1, s.range(0), 1e-3));
  s.SetItemsProcessed(s.iterations() * s.range(0));
}

void walk_serial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(walk_embed_serial(rule(), Functional::extrema, 0.02, 1, s.range(0)));
  s.SetItemsProcessed(s.iterations() * s.range(0));
}

void walk_omp(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(walk_embed(rule(), Functional::extrema, 0.02, 1, s.range(0)));
  s.SetItemsProcessed(s.iterations() * s.range(0));
}

}  // namespace

BENCHMARK(exact_serial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(exact_omp)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(ppp_serial)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(ppp_omp)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(walk_serial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(walk_omp)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
