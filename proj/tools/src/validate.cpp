#include "elmdecomp_cli/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "elmdecomp/decompose.hpp"
#include "elmdecomp/mcmc_diagnostics.hpp"
#include "elmdecomp/oracles.hpp"
#include "elmdecomp_cli/presets.hpp"

namespace elm::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<int> random_groups(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 6), width(1, 4);
  std::vector<int> sizes(static_cast<std::size_t>(count(rng)));
  for (auto& s : sizes) s = width(rng);
  return sizes;
}

}  // namespace

CheckResult check_linear_triangle(int fixtures, std::uint64_t seed, double tolerance) {
  const auto start = Clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rows(5, 200);
  double worst = 0.0;
  for (int f = 0; f < fixtures; ++f) {
    const auto sizes = random_groups(rng);
    const auto d1 = fuzz_design(rng, rows(rng), sizes);
    const auto d2 = fuzz_design(rng, rows(rng), sizes);
    const MarginalDraw b1{fuzz_vector(rng, d1.cols(), 1.0), 0};
    const MarginalDraw b2{fuzz_vector(rng, d1.cols(), 1.0), 0};
    const auto got = overall_decompose(d1, d2, b1, b2, Link::identity);
    const auto want = oracle::linear_oracle(d1.column_means(), d2.column_means(), b1.beta, b2.beta);
    worst = std::max({worst, std::abs(got.x_effect - want.x_effect),
                      std::abs(got.beta_effect - want.beta_effect)});
  }
  return {"linear_triangle", worst < tolerance,
          std::to_string(fixtures) + " fixtures, max |diff| " + sci(worst), seconds_since(start)};
}

CheckResult check_additivity(int cases, std::uint64_t seed, double tolerance) {
  const auto start = Clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rows(5, 120);
  double worst_overall = 0.0, worst_groups = 0.0;
  for (int c = 0; c < cases; ++c) {
    const auto sizes = random_groups(rng);
    const auto d1 = fuzz_design(rng, rows(rng), sizes);
    const auto d2 = fuzz_design(rng, rows(rng), sizes);
    const MarginalDraw b1{fuzz_vector(rng, d1.cols(), 0.8), 0};
    const MarginalDraw b2{fuzz_vector(rng, d1.cols(), 0.8), 0};
    auto order = default_order(d2);
    std::shuffle(order.begin(), order.end(), rng);
    const auto o = overall_decompose(d1, d2, b1, b2);
    double sum = 0.0;
    for (const auto& g : coefficient_decompose(d2, b1, b2, order)) sum += g.effect;
    worst_overall = std::max(worst_overall, std::abs(o.x_effect + o.beta_effect - o.overall_diff));
    worst_groups = std::max(worst_groups, std::abs(sum - o.beta_effect));
  }
  return {"collapsing_sum", worst_overall < tolerance && worst_groups < tolerance,
          std::to_string(cases) + " cases, max |x + beta - overall| " + sci(worst_overall) +
              ", max |sum groups - beta| " + sci(worst_groups),
          seconds_since(start)};
}

CheckResult check_mc_grid(long draws, Marginalization convention, std::uint64_t seed) {
  const auto start = Clock::now();
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  int failures = 0;
  double worst_z = 0.0;
  std::string worst_point;
  std::uint64_t stream = seed;
  for (double eta : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    for (double s2 : {0.0, 0.25, 1.0, 4.0}) {
      const Eigen::VectorXd beta = Eigen::VectorXd::Constant(1, eta);
      const double closed = marginal_prob(x, marginalize(beta, s2, convention));
      const auto mc = oracle::mc_marginalization_oracle(beta, s2, x, draws, stream++);
      const double diff = std::abs(closed - mc.estimate);
      const bool ok = mc.standard_error > 0.0 ? diff <= 3.0 * mc.standard_error : diff <= 1e-15;
      const double z = mc.standard_error > 0.0 ? diff / mc.standard_error : (ok ? 0.0 : INFINITY);
      if (!ok) ++failures;
      if (z > worst_z) {
        worst_z = z;
        worst_point = "x'b=" + sci(eta) + ", sigma2=" + sci(s2) + ": closed " + sci(closed) +
                      " vs MC " + sci(mc.estimate);
      }
    }
  }
  std::string detail = "20 grid points, " + std::to_string(draws) + " draws, " +
                       std::string(to_string(convention)) + "; " + std::to_string(failures) +
                       " outside 3 SE; worst " + sci(worst_z) + " SE";
  if (!worst_point.empty()) detail += " (" + worst_point + ")";
  return {"mc_marginalization_grid", failures == 0, detail, seconds_since(start)};
}

PriorLimitSetup default_prior_limit_setup() {
  PriorLimitSetup s;
  s.mcmc.iterations = 6000;
  s.mcmc.burn_in = 1000;
  s.mcmc.thin = 4;
  s.mcmc.target_draws = 1250;
  return s;
}

CheckResult check_prior_limit(const PriorLimitSetup& setup, std::uint64_t seed) {
  const auto start = Clock::now();
  auto dgp = four_column_dgp(setup.beta, setup.beta, 0.0, setup.clusters, setup.births);
  auto [s1, s2] = synthesize(dgp, seed);
  const auto data = build_designs(std::move(s1), std::move(s2), dgp.schema, dgp.poor_quantile);

  auto mcmc = setup.mcmc;
  mcmc.seed = seed;
  mcmc.chain = 7;
  const auto draws = fit(data.d1, setup.prior, mcmc, SurveyId::S1);
  const auto ml = oracle::ml_probit_fit(data.d1);

  bool ok = true;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < draws.coefficients(); ++k) {
    const Eigen::VectorXd col = draws.beta.col(k);
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() / (col.size() - 1));
    const auto ess = effective_sample_size({col.data(), static_cast<std::size_t>(col.size())});
    const double mcse = sd / std::sqrt(std::max(1.0, ess.ess));
    const double z = std::abs(mean - ml.beta[k]) / mcse;
    worst = std::max(worst, z);
    if (!(z <= setup.se_multiple)) ok = false;
  }
  return {"ml_prior_limit", ok,
          "N=" + std::to_string(data.d1.rows()) + ", sigma2 posterior mean " +
              sci(draws.sigma2.mean()) + ", worst |posterior mean - ML| = " + sci(worst) +
              " MC SE (limit " + sci(setup.se_multiple) + ")",
          seconds_since(start)};
}

std::vector<CheckResult> run_validation_suite(const ValidateOptions& options) {
  std::vector<CheckResult> out;
  out.push_back(check_linear_triangle(100, options.seed));
  out.push_back(check_mc_grid(1000000, options.convention, options.seed));
  out.push_back(check_prior_limit(default_prior_limit_setup(), options.seed));
  out.push_back(check_additivity(1000, options.seed));
  return out;
}

void print_results(const std::vector<CheckResult>& results, std::ostream& out) {
  for (const auto& r : results) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2fs", r.seconds);
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " [" << secs << "] " << r.detail << '\n';
  }
}

}  // namespace elm::cli
