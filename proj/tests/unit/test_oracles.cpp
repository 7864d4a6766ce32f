#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "elmdecomp/decompose.hpp"
#include "elmdecomp/error.hpp"
#include "elmdecomp/normal.hpp"
#include "elmdecomp/oracles.hpp"
#include "fixtures.hpp"

using namespace elm;

namespace {

DesignMatrix intercept_only(int rows, int ones) {
  std::mt19937_64 rng(0);
  auto d = elm::testing::random_design(rng, rows, {});
  d.outcome = Eigen::VectorXd::Zero(rows);
  d.outcome.head(ones).setOnes();
  return d;
}

}  // namespace

TEST_CASE("linear oracle on a small hand example") {
  const Eigen::Vector2d x1(1.0, 2.0), x2(1.0, 1.0), b1(0.5, 0.3), b2(0.5, 0.1);
  const auto r = oracle::linear_oracle(x1, x2, b1, b2);
  // (0 * 0.5 + 1 * 0.3, 1 * 0 + 1 * 0.2), evaluated term by term.
  double x_effect = 0.0, beta_effect = 0.0;
  for (int k = 0; k < 2; ++k) {
    x_effect += (x1[k] - x2[k]) * b1[k];
    beta_effect += x2[k] * (b1[k] - b2[k]);
  }
  CHECK(r.x_effect == doctest::Approx(0.3));
  CHECK(r.beta_effect == doctest::Approx(0.2));
  CHECK(r.x_effect == doctest::Approx(x_effect).epsilon(1e-15));
  CHECK(r.beta_effect == doctest::Approx(beta_effect).epsilon(1e-15));
  CHECK(oracle::linear_oracle(x1, x2, b1, b1).beta_effect == 0.0);
  CHECK(oracle::linear_oracle(x1, x1, b1, b2).x_effect == 0.0);
  CHECK_THROWS_AS(oracle::linear_oracle(x1, Eigen::Vector3d::Zero(), b1, b2), InvalidArgument);
}

TEST_CASE("Monte-Carlo marginalization oracle") {
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  const auto exact = oracle::mc_marginalization_oracle(Eigen::VectorXd::Constant(1, 0.5), 0.0, x, 10000, 1);
  CHECK(exact.estimate == norm_cdf(0.5));
  CHECK(exact.standard_error == 0.0);
  const auto zero = oracle::mc_marginalization_oracle(Eigen::VectorXd::Zero(1), 2.0, x, 100000, 2);
  CHECK(std::abs(zero.estimate - 0.5) < 3.0 * zero.standard_error);
  const auto big = oracle::mc_marginalization_oracle(Eigen::VectorXd::Ones(1), 3.0, x, 1000000, 3);
  CHECK(std::abs(big.estimate - norm_cdf(0.5)) < 3.0 * big.standard_error);
  CHECK(big.estimate == doctest::Approx(0.6915).epsilon(2e-3));
  CHECK(big.standard_error < 5e-4);
  CHECK_THROWS_AS(oracle::mc_marginalization_oracle(x, 1.0, x, 999, 1), InvalidArgument);
}

TEST_CASE("ML intercept is the probit of the observed rate") {
  const auto fit = oracle::ml_probit_fit(intercept_only(1000, 200));
  CHECK(std::abs(fit.beta[0] - (-0.841621)) < 1e-6);
  // Fisher information for one Bernoulli mean mapped through the probit.
  const double p = 0.2, phi = norm_pdf(norm_quantile(p));
  CHECK(fit.standard_errors[0] == doctest::Approx(std::sqrt(p * (1 - p) / 1000.0) / phi).epsilon(1e-6));
}

TEST_CASE("a covariate balanced across outcomes has zero coefficient") {
  std::mt19937_64 rng(1);
  auto d = elm::testing::random_design(rng, 400, {1});
  for (int i = 0; i < 400; ++i) {
    d.values(i, 1) = (i % 2 == 0) ? 1.0 : 0.0;
    d.outcome[i] = (i % 4 < 2) ? 1.0 : 0.0;
  }
  const auto fit = oracle::ml_probit_fit(d);
  CHECK(std::abs(fit.beta[1]) < 1e-8);
  CHECK(std::abs(fit.beta[0]) < 1e-8);
}

TEST_CASE("ML recovers the generating coefficients at N = 1e5") {
  DgpConfig dgp;
  dgp.schema = CovariateSchema({{"sex", CovariateKind::binary, 0, 0, "female"}});
  for (auto& s : dgp.surveys) {
    s.survey_year = 2000;
    s.beta = {-1.0, 0.5};
    s.sigma2 = 0.0;
    s.clusters = 4000;
    s.births_per_cluster = 25;
  }
  const auto built = elm::testing::build_both(dgp, 12);
  REQUIRE(built.d1.rows() == 100000);
  const auto fit = oracle::ml_probit_fit(built.d1);
  CHECK(std::abs(fit.beta[0] + 1.0) < 0.02);
  CHECK(std::abs(fit.beta[1] - 0.5) < 0.02);
}

TEST_CASE("the partial-sum variance ends at the coefficient-effect variance") {
  std::mt19937_64 rng(3);
  const auto d1 = elm::testing::random_design(rng, 80, {1, 2, 1});
  const auto d2 = elm::testing::random_design(rng, 80, {1, 2, 1});
  PosteriorDraws p1, p2;
  for (auto* p : {&p1, &p2}) {
    p->beta.resize(300, 5);
    p->sigma2.resize(300);
    for (int l = 0; l < 300; ++l) {
      p->beta.row(l) = elm::testing::random_vector(rng, 5, 0.4).transpose();
      p->sigma2[l] = 0.3;
    }
  }
  auto order = default_order(d2);
  std::sort(order.begin(), order.end());
  do {
    const auto prof = oracle::variance_collapse(d2, p1, p2, order);
    REQUIRE(prof.entries.size() == 4);
    CHECK(prof.entries[0].terms == 1);
    CHECK(prof.entries[3].group_added == order[3]);
    CHECK(std::abs(prof.final_variance - prof.beta_effect_variance) <=
          1e-12 * std::max(1.0, prof.beta_effect_variance));
    CHECK(prof.correlation.isApprox(prof.correlation.transpose()));
    CHECK((prof.correlation.diagonal().array() == 1.0).all());
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("variance profile of hand-made effects") {
  Eigen::MatrixXd g(4, 2);
  g << 1, -1, 2, -2, 3, -3, 4, -4;
  const Eigen::VectorXd beta = Eigen::VectorXd::Zero(4);
  const auto prof = oracle::variance_collapse(g, beta, {"a", "b"});
  CHECK(prof.entries[0].partial_sum_variance == doctest::Approx(5.0 / 3.0));
  CHECK(prof.entries[1].partial_sum_variance == 0.0);
  CHECK(prof.correlation(0, 1) == doctest::Approx(-1.0));
  Eigen::MatrixXd flat(3, 2);
  flat << 1, 0, 2, 0, 3, 0;
  CHECK(oracle::variance_collapse(flat, Eigen::VectorXd::Zero(3), {"a", "b"}).correlation(0, 1) == 0.0);
}

TEST_CASE("single-group and degenerate profiles") {
  Eigen::MatrixXd one(5, 1);
  one << 0.1, 0.3, -0.2, 0.0, 0.4;
  const auto prof = oracle::variance_collapse(one, one.col(0), {"intercept"});
  REQUIRE(prof.entries.size() == 1);
  CHECK(prof.entries[0].partial_sum_variance == prof.beta_effect_variance);

  const auto flat = oracle::variance_collapse(Eigen::MatrixXd::Constant(6, 3, 0.2),
                                              Eigen::VectorXd::Constant(6, 0.6), {"a", "b", "c"});
  for (const auto& e : flat.entries) CHECK(e.partial_sum_variance == 0.0);
  CHECK(flat.beta_effect_variance == 0.0);
}
