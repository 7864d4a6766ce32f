#include <doctest.h>

#include <random>

#include "elmdecomp/error.hpp"
#include "elmdecomp/mcmc_diagnostics.hpp"

using namespace elm;

namespace {

std::vector<double> ar1(double phi, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> v(n);
  double x = z(rng) / std::sqrt(1.0 - phi * phi);
  for (int i = 0; i < n; ++i) {
    x = phi * x + z(rng);
    v[i] = x;
  }
  return v;
}

// Direct estimator written independently of the library.
double acf_at(const std::vector<double>& v, int lag) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double c0 = 0.0, ck = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) c0 += (v[i] - mean) * (v[i] - mean);
  for (std::size_t i = 0; i + lag < v.size(); ++i) ck += (v[i] - mean) * (v[i + lag] - mean);
  return ck / c0;
}

}  // namespace

TEST_CASE("white noise has ESS near its length") {
  const auto v = ar1(0.0, 1000, 1);
  const auto r = effective_sample_size(v);
  CHECK(r.ess >= 800);
  CHECK(r.ess <= 1000);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("AR(1) with phi 0.9 has ESS near n(1-phi)/(1+phi)") {
  const auto v = ar1(0.9, 5000, 2);
  const double expected = 5000.0 * 0.1 / 1.9;
  const auto r = effective_sample_size(v);
  CHECK(r.ess > 0.7 * expected);
  CHECK(r.ess < 1.3 * expected);
}

TEST_CASE("autocorrelation matches the direct estimator") {
  const auto v = ar1(0.5, 400, 3);
  const auto acf = autocorrelation(v, 10);
  REQUIRE(acf.size() == 10);
  for (int k = 1; k <= 10; ++k) CHECK(acf[k - 1] == doctest::Approx(acf_at(v, k)).epsilon(1e-12));
  CHECK(autocorrelation(std::vector<double>(5, 1.0), 10).size() <= 4);
}

TEST_CASE("a constant trace is degenerate") {
  const auto r = effective_sample_size(std::vector<double>(500, 2.0));
  CHECK(r.degenerate);
}

TEST_CASE("diagnose reports every parameter and the independence target") {
  PosteriorDraws d;
  const int n = 1300;
  d.beta.resize(n, 2);
  d.sigma2.resize(n);
  const auto a = ar1(0.0, n, 4), b = ar1(0.0, n, 5), c = ar1(0.0, n, 6);
  for (int i = 0; i < n; ++i) {
    d.beta(i, 0) = a[i];
    d.beta(i, 1) = b[i];
    d.sigma2[i] = 1.0 + 0.01 * c[i];
  }
  d.column_names = {"intercept", "sex:male"};
  const auto diag = diagnose(d);
  REQUIRE(diag.parameters.size() == 3);
  CHECK(diag.parameters[2].name == "sigma2");
  CHECK(diag.draws == n);
  CHECK(diag.acceptance_rate == 1.0);
  CHECK(diag.min_ess <= diag.parameters[0].ess);
  CHECK(diag.parameters[0].acf.size() == kMaxAcfLag);
  CHECK(diag.meets_independence_target() == (diag.min_ess >= 1000.0));
  CHECK_FALSE(diag.meets_independence_target(2000));

  PosteriorDraws tiny;
  tiny.beta.resize(10, 1);
  tiny.sigma2.resize(10);
  CHECK_THROWS_AS(diagnose(tiny), InvalidArgument);
}
