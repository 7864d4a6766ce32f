#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>
#include <utility>

#include "elmdecomp/decompose.hpp"
#include "elmdecomp/oracles.hpp"

namespace {

struct Fixture {
  elm::DesignMatrix d1, d2;
  elm::PosteriorDraws draws1, draws2;
};

elm::DesignMatrix random_design(std::mt19937_64& rng, int rows) {
  std::normal_distribution<double> z;
  elm::DesignMatrix d;
  const int widths[] = {4, 4, 4, 4, 3, 1, 1};
  int p = 1;
  for (int w : widths) p += w;
  d.values.resize(rows, p);
  d.column_names.push_back("intercept");
  int col = 1;
  for (int g = 0; g < 7; ++g) {
    d.column_groups.push_back({"g" + std::to_string(g), col, col + widths[g]});
    for (int k = 0; k < widths[g]; ++k) d.column_names.push_back("g" + std::to_string(g) + ":" + std::to_string(k));
    col += widths[g];
  }
  for (int i = 0; i < rows; ++i) {
    d.values(i, 0) = 1.0;
    for (int c = 1; c < p; ++c) d.values(i, c) = 0.3 * z(rng);
    d.cluster_index.push_back(0);
  }
  d.cluster_ids = {"c"};
  d.outcome = Eigen::VectorXd::Zero(rows);
  return d;
}

elm::PosteriorDraws random_draws(std::mt19937_64& rng, const elm::DesignMatrix& d, int count) {
  std::normal_distribution<double> z;
  elm::PosteriorDraws out;
  out.beta.resize(count, d.cols());
  out.sigma2.resize(count);
  for (int l = 0; l < count; ++l) {
    for (Eigen::Index c = 0; c < d.cols(); ++c) out.beta(l, c) = (c == 0 ? -1.0 : 0.0) + 0.1 * z(rng);
    out.sigma2[l] = 0.25 + 0.01 * std::abs(z(rng));
  }
  out.column_names = d.column_names;
  out.column_groups = d.column_groups;
  return out;
}

const Fixture& fixture(int rows, int draws) {
  static std::map<std::pair<int, int>, Fixture> cache;
  auto it = cache.find({rows, draws});
  if (it != cache.end()) return it->second;
  std::mt19937_64 rng(11);
  Fixture f;
  f.d1 = random_design(rng, rows);
  f.d2 = random_design(rng, rows);
  f.draws1 = random_draws(rng, f.d1, draws);
  f.draws2 = random_draws(rng, f.d2, draws);
  return cache.emplace(std::make_pair(rows, draws), std::move(f)).first->second;
}

}  // namespace

// Full posterior decomposition with the default order: eight groups, one
// pass over the survey-2 rows per group swap.
static void BM_PosteriorDecompose(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto order = elm::default_order(f.d2);
  for (auto _ : state) {
    auto r = elm::posterior_decompose(f.d1, f.d2, f.draws1, f.draws2, order, 14.0);
    benchmark::DoNotOptimize(r.summary.beta_effect.mean);
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_PosteriorDecompose)->Args({5000, 250})->Args({5000, 1250})->Args({20000, 1250})->Unit(benchmark::kMillisecond);

static void BM_VarianceProfile(benchmark::State& state) {
  const auto& f = fixture(5000, 1250);
  const auto order = elm::default_order(f.d2);
  const auto draws = elm::decompose_draws(f.d1, f.d2, f.draws1, f.draws2, order);
  for (auto _ : state) {
    auto p = elm::oracle::variance_collapse(draws.group_effects, draws.beta_effect, order);
    benchmark::DoNotOptimize(p.final_variance);
  }
}
BENCHMARK(BM_VarianceProfile);

BENCHMARK_MAIN();
