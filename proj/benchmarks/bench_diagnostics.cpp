#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "elmdecomp/bspline.hpp"
#include "elmdecomp/mcmc_diagnostics.hpp"

static void BM_EffectiveSampleSize(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  std::vector<double> trace(static_cast<std::size_t>(state.range(0)));
  double prev = 0.0;
  for (auto& v : trace) v = prev = 0.6 * prev + z(rng);
  for (auto _ : state) {
    auto r = elm::effective_sample_size(trace);
    benchmark::DoNotOptimize(r.ess);
  }
}
BENCHMARK(BM_EffectiveSampleSize)->Arg(1250)->Arg(5000)->Arg(25000);

static void BM_SplineBasis(benchmark::State& state) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(15.0, 45.0);
  std::vector<double> sample(5000);
  for (auto& v : sample) v = u(rng);
  const auto knots = elm::place_knots(sample, 3, static_cast<int>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    auto b = elm::bspline_basis(sample[i++ % sample.size()], knots);
    benchmark::DoNotOptimize(b.data());
  }
}
BENCHMARK(BM_SplineBasis)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
