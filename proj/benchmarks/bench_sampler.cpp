#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <string>

#include "elmdecomp/rng.hpp"
#include "elmdecomp/sampler.hpp"

namespace {

elm::DesignMatrix clustered_design(int clusters, int births, int p) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u;
  elm::DesignMatrix d;
  const int n = clusters * births;
  d.values.resize(n, p);
  d.outcome.resize(n);
  d.column_names.push_back("intercept");
  for (int c = 1; c < p; ++c) {
    d.column_names.push_back("x" + std::to_string(c));
    d.column_groups.push_back({"x" + std::to_string(c), c, c + 1});
  }
  for (int j = 0; j < clusters; ++j) d.cluster_ids.push_back(std::to_string(j));
  for (int i = 0; i < n; ++i) {
    d.values(i, 0) = 1.0;
    double eta = -0.8;
    for (int c = 1; c < p; ++c) {
      d.values(i, c) = z(rng);
      eta += 0.2 * d.values(i, c);
    }
    d.cluster_index.push_back(i / births);
    d.outcome[i] = u(rng) < 0.5 * (1.0 + std::erf(eta / std::sqrt(2.0))) ? 1.0 : 0.0;
  }
  return d;
}

}  // namespace

// Cost of one Gibbs sweep, measured over short chains.
static void BM_GibbsSweeps(benchmark::State& state) {
  const auto design = clustered_design(static_cast<int>(state.range(0)), 25, static_cast<int>(state.range(1)));
  elm::McmcConfig cfg;
  cfg.iterations = 200;
  cfg.burn_in = 0;
  cfg.thin = 1;
  cfg.target_draws = 200;
  for (auto _ : state) {
    auto draws = elm::fit(design, elm::PriorSpec{}, cfg, elm::SurveyId::S1);
    benchmark::DoNotOptimize(draws.beta.data());
  }
  state.SetItemsProcessed(state.iterations() * cfg.iterations);
}
BENCHMARK(BM_GibbsSweeps)->Args({200, 4})->Args({200, 24})->Args({400, 24})->Unit(benchmark::kMillisecond);

static void BM_TruncatedNormal(benchmark::State& state) {
  auto rng = elm::make_stream(3, 0);
  const double mean = static_cast<double>(state.range(0));
  double sum = 0.0;
  for (auto _ : state) sum += elm::sample_truncated_normal(mean, 1.0, elm::TruncationSide::left_of_zero, rng);
  benchmark::DoNotOptimize(sum);
}
// A mean of -12 leaves almost no mass on the admissible side and exercises
// the rejection branch.
BENCHMARK(BM_TruncatedNormal)->Arg(2)->Arg(0)->Arg(-3)->Arg(-12);

BENCHMARK_MAIN();
