#include <doctest.h>

#include <cmath>

#include "elmdecomp/error.hpp"
#include "elmdecomp/normal.hpp"
#include "elmdecomp/oracles.hpp"
#include "elmdecomp/synthesize.hpp"
#include "fixtures.hpp"

using namespace elm;

namespace {

DgpConfig intercept_dgp(double intercept, double sigma2, int clusters, int per_cluster) {
  DgpConfig dgp;
  dgp.schema = CovariateSchema({{"sex", CovariateKind::binary, 0, 0, "female"}});
  for (int k = 0; k < 2; ++k) {
    auto& s = dgp.surveys[k];
    s.survey_year = 2000 + 10 * k;
    s.beta = {intercept, 0.0};
    s.sigma2 = sigma2;
    s.clusters = clusters;
    s.births_per_cluster = per_cluster;
  }
  return dgp;
}

double death_rate(const SurveySample& s) {
  double deaths = 0.0;
  s.for_each_birth([&](const BirthRecord& r) { deaths += r.outcome; });
  return deaths / static_cast<double>(s.births());
}

}  // namespace

TEST_CASE("without cluster effects the death rate is Phi(intercept)") {
  const auto [s1, s2] = synthesize(intercept_dgp(norm_quantile(0.1), 0.0, 1000, 100), 3);
  CHECK(s1.births() == 100000);
  CHECK(s1.clusters().size() == 1000);
  CHECK(std::abs(death_rate(s1) - 0.100) < 0.003);
  CHECK(std::abs(death_rate(s2) - 0.100) < 0.003);
  CHECK(s2.survey_id() == SurveyId::S2);
  CHECK(s2.survey_year() == 2010);
}

TEST_CASE("with cluster effects the death rate is the marginal probability") {
  const double intercept = norm_quantile(0.1);
  const auto [s1, s2] = synthesize(intercept_dgp(intercept, 1.0, 1000, 100), 4);
  const double closed_form = norm_cdf(intercept / std::sqrt(2.0));
  const auto mc = oracle::mc_marginalization_oracle(Eigen::VectorXd::Constant(1, intercept), 1.0,
                                                     Eigen::VectorXd::Ones(1), 1000000, 9);
  CHECK(std::abs(closed_form - 0.1824) < 1e-3);
  CHECK(std::abs(mc.estimate - closed_form) < 3.0 * mc.standard_error);
  // Cluster-level variation dominates the sampling error: sd ~ 0.15 / sqrt(1000).
  CHECK(std::abs(death_rate(s1) - closed_form) < 0.015);
  CHECK(std::abs(death_rate(s2) - closed_form) < 0.015);
}

TEST_CASE("synthesis is deterministic in the seed") {
  const auto dgp = elm::testing::recovery_dgp();
  const auto a = synthesize(dgp, 17);
  const auto b = synthesize(dgp, 17);
  const auto c = synthesize(dgp, 18);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK_FALSE(a.first == c.first);
}

TEST_CASE("generated covariates respect their laws") {
  const auto [s1, s2] = synthesize(elm::testing::recovery_dgp(), 5);
  s1.for_each_birth([](const BirthRecord& r) {
    REQUIRE(r.maternal_age >= 15.0);
    REQUIRE(r.maternal_age <= 45.0);
    REQUIRE(r.maternal_education >= 0.0);
    REQUIRE(r.maternal_education <= 16.0);
    REQUIRE(r.wealth_rank >= 0.0);
    REQUIRE(r.wealth_rank <= 1.0);
    REQUIRE(r.birth_interval.has_value() == (r.birth_order > 1));
  });
  double min_edu = 100.0;
  s2.for_each_birth([&](const BirthRecord& r) { min_edu = std::min(min_edu, r.maternal_education); });
  CHECK(min_edu >= 2.0);
}

TEST_CASE("a beta of the wrong length is rejected") {
  auto dgp = elm::testing::recovery_dgp();
  dgp.surveys[1].beta.pop_back();
  CHECK_THROWS_AS(synthesize(dgp, 1), InvalidArgument);
  dgp = elm::testing::recovery_dgp();
  dgp.surveys[0].sigma2 = -1.0;
  CHECK_THROWS_AS(synthesize(dgp, 1), InvalidArgument);
}
