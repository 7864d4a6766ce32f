#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "elmdecomp/decompose.hpp"
#include "elmdecomp/error.hpp"
#include "elmdecomp/oracles.hpp"
#include "elmdecomp/report.hpp"
#include "fixtures.hpp"

using namespace elm;
using elm::testing::random_design;
using elm::testing::random_vector;

namespace {

MarginalDraw md(const Eigen::VectorXd& b) { return {b, 0}; }

std::vector<std::string> all_groups(const DesignMatrix& d) { return default_order(d); }

double group_sum(const std::vector<GroupEffect>& g) {
  double s = 0.0;
  for (const auto& e : g) s += e.effect;
  return s;
}

PosteriorDraws random_draws(std::mt19937_64& rng, const DesignMatrix& d, int count,
                            double shift = 0.0) {
  PosteriorDraws out;
  out.beta.resize(count, d.cols());
  out.sigma2.resize(count);
  const Eigen::VectorXd centre = random_vector(rng, d.cols(), 0.5);
  for (int l = 0; l < count; ++l) {
    out.beta.row(l) = (centre + random_vector(rng, d.cols(), 0.05)).transpose();
    out.beta(l, 0) += shift - 1.2;
    out.sigma2[l] = 0.2 + 0.01 * (l % 7);
  }
  out.column_names = d.column_names;
  out.column_groups = d.column_groups;
  return out;
}

}  // namespace

TEST_CASE("equal coefficients leave no coefficient effect") {
  std::mt19937_64 rng(1);
  const auto d1 = random_design(rng, 50, {2, 1});
  const auto d2 = random_design(rng, 70, {2, 1});
  const Eigen::VectorXd b = random_vector(rng, 4);
  const auto o = overall_decompose(d1, d2, md(b), md(b));
  CHECK(o.beta_effect == 0.0);
  CHECK(o.x_effect == doctest::Approx(o.overall_diff));
  for (const auto& g : coefficient_decompose(d2, md(b), md(b), all_groups(d2))) CHECK(g.effect == 0.0);
}

TEST_CASE("identical designs leave no covariate effect") {
  std::mt19937_64 rng(2);
  const auto d = random_design(rng, 60, {3});
  const auto o = overall_decompose(d, d, md(random_vector(rng, 4)), md(random_vector(rng, 4)));
  CHECK(o.x_effect == 0.0);
  CHECK(o.beta_effect == doctest::Approx(o.overall_diff));
}

TEST_CASE("under an identity link the effects equal the closed-form linear split") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d1 = random_design(rng, 30 + trial, {1, 2});
    const auto d2 = random_design(rng, 45, {1, 2});
    const Eigen::VectorXd b1 = random_vector(rng, 4), b2 = random_vector(rng, 4);
    const auto o = overall_decompose(d1, d2, md(b1), md(b2), Link::identity);
    const auto lin = oracle::linear_oracle(d1.column_means(), d2.column_means(), b1, b2);
    CHECK(std::abs(o.x_effect - lin.x_effect) < 1e-12);
    CHECK(std::abs(o.beta_effect - lin.beta_effect) < 1e-12);
    // Each linear group effect is xbar2' (b1 - b2) restricted to the group.
    const auto groups = coefficient_decompose(d2, md(b1), md(b2), all_groups(d2), Link::identity);
    const Eigen::VectorXd xbar2 = d2.column_means();
    CHECK(std::abs(groups[0].effect - xbar2[0] * (b1[0] - b2[0])) < 1e-12);
    const auto* g = d2.group(groups[2].group);
    CHECK(std::abs(groups[2].effect - xbar2.segment(g->begin, g->size())
                                          .dot((b1 - b2).segment(g->begin, g->size()))) < 1e-12);
  }
}

TEST_CASE("sequential swaps telescope to the coefficient effect") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> groups(1, 5), width(1, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> sizes(groups(rng));
    for (auto& s : sizes) s = width(rng);
    const auto d1 = random_design(rng, 25, sizes);
    const auto d2 = random_design(rng, 25, sizes);
    const Eigen::VectorXd b1 = random_vector(rng, d1.cols(), 1.0);
    const Eigen::VectorXd b2 = random_vector(rng, d1.cols(), 1.0);
    auto order = all_groups(d2);
    std::shuffle(order.begin(), order.end(), rng);
    const auto o = overall_decompose(d1, d2, md(b1), md(b2));
    const auto g = coefficient_decompose(d2, md(b1), md(b2), order);
    REQUIRE(g.size() == order.size());
    CHECK(std::abs(group_sum(g) - o.beta_effect) < 1e-12);
    CHECK(std::abs(o.x_effect + o.beta_effect - o.overall_diff) < 1e-12);
  }
}

TEST_CASE("an intercept-only difference lands entirely on the intercept") {
  std::mt19937_64 rng(5);
  const auto d = random_design(rng, 80, {2, 2});
  const Eigen::VectorXd b1 = random_vector(rng, 5);
  Eigen::VectorXd b2 = b1;
  b2[0] -= 0.4;
  const auto g = coefficient_decompose(d, md(b1), md(b2), all_groups(d));
  CHECK(g[0].group == "intercept");
  CHECK(g[0].effect > 0.0);
  for (std::size_t k = 1; k < g.size(); ++k) CHECK(g[k].effect == 0.0);
}

TEST_CASE("the total is independent of the order, each group is not") {
  std::mt19937_64 rng(6);
  const auto d = random_design(rng, 80, {1, 1, 1});
  const Eigen::VectorXd b1 = random_vector(rng, 4, 1.0), b2 = random_vector(rng, 4, 1.0);
  auto order = all_groups(d);
  std::sort(order.begin(), order.end());
  const double first = group_sum(coefficient_decompose(d, md(b1), md(b2), order));
  int permutations = 0;
  do {
    CHECK(std::abs(group_sum(coefficient_decompose(d, md(b1), md(b2), order)) - first) < 1e-12);
    ++permutations;
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(permutations == 24);
}

TEST_CASE("swapping the surveys flips the overall difference") {
  std::mt19937_64 rng(7);
  const auto d1 = random_design(rng, 40, {2});
  const auto d2 = random_design(rng, 50, {2});
  const Eigen::VectorXd b1 = random_vector(rng, 3), b2 = random_vector(rng, 3);
  const auto fwd = overall_decompose(d1, d2, md(b1), md(b2));
  const auto back = overall_decompose(d2, d1, md(b2), md(b1));
  CHECK(fwd.overall_diff == doctest::Approx(-back.overall_diff));
}

TEST_CASE("a constant offset in the intercept shifts all rates together") {
  std::mt19937_64 rng(8);
  const auto d1 = random_design(rng, 60, {1});
  const auto d2 = d1;
  const Eigen::VectorXd b1 = random_vector(rng, 2);
  Eigen::VectorXd b2 = b1;
  b2[0] += 0.3;
  const auto o = overall_decompose(d1, d2, md(b1), md(b2));
  CHECK(o.overall_diff < 0.0);
  CHECK(o.x_effect == 0.0);
  const auto g = coefficient_decompose(d2, md(b1), md(b2), all_groups(d2));
  CHECK(g[0].effect == doctest::Approx(o.overall_diff));
}

TEST_CASE("invalid orders are rejected") {
  std::mt19937_64 rng(9);
  const auto d = random_design(rng, 10, {1, 1});
  const Eigen::VectorXd b = random_vector(rng, 3);
  CHECK_THROWS_AS(coefficient_decompose(d, md(b), md(b), {"intercept", "g0"}), InvalidArgument);
  CHECK_THROWS_AS(coefficient_decompose(d, md(b), md(b), {"intercept", "g0", "g0"}), InvalidArgument);
  CHECK_THROWS_AS(coefficient_decompose(d, md(b), md(b), {"intercept", "g0", "gx"}), InvalidArgument);
}

TEST_CASE("posterior decomposition over draws") {
  std::mt19937_64 rng(10);
  const auto d1 = random_design(rng, 120, {2, 1});
  const auto d2 = random_design(rng, 150, {2, 1});
  const auto p1 = random_draws(rng, d1, 200, 0.3);
  const auto p2 = random_draws(rng, d2, 200);
  const auto order = all_groups(d2);
  const auto r = posterior_decompose(d1, d2, p1, p2, order, 14.0);
  REQUIRE(r.draws.overall_diff.size() == 200);
  for (int l = 0; l < 200; ++l) {
    CHECK(std::abs(r.draws.group_effects.row(l).sum() - r.draws.beta_effect[l]) < 1e-12);
    CHECK(std::abs(r.draws.rate1[l] - r.draws.rate2[l] - r.draws.overall_diff[l]) < 1e-12);
    const auto b1 = marginalize(p1, l), b2 = marginalize(p2, l);
    CHECK(r.draws.rate1[l] == mean_probability(d1, b1.beta));
  }
  const auto& s = r.summary;
  CHECK(s.overall_diff.percent == doctest::Approx(100.0));
  CHECK(s.x_effect.percent + s.beta_effect.percent == doctest::Approx(100.0));
  CHECK(s.groups.size() == order.size());
  CHECK(s.overall_diff.per_year == doctest::Approx(1000.0 * s.overall_diff.mean / 14.0));
  CHECK(s.mortality.s1.mean == doctest::Approx(1000.0 * r.draws.rate1.mean()));
  CHECK(s.overall_diff.lower <= s.overall_diff.mean);
  CHECK(s.overall_diff.mean <= s.overall_diff.upper);
  CHECK(s.overall_diff.significant);
}

TEST_CASE("draws without variation give degenerate intervals") {
  std::mt19937_64 rng(11);
  const auto d1 = random_design(rng, 50, {1});
  const auto d2 = random_design(rng, 50, {1});
  const auto p1 = elm::testing::constant_draws(random_vector(rng, 2), 0.2, 40, d1);
  const auto p2 = elm::testing::constant_draws(random_vector(rng, 2), 0.3, 40, d2);
  const auto s = posterior_decompose(d1, d2, p1, p2, all_groups(d2), 10.0).summary;
  CHECK(s.beta_effect.lower == doctest::Approx(s.beta_effect.mean));
  CHECK(s.beta_effect.upper == doctest::Approx(s.beta_effect.mean));
  CHECK(s.beta_effect.percent_lower == doctest::Approx(s.beta_effect.percent));
}

TEST_CASE("published arithmetic") {
  CHECK(format_rate(annualize(75.0, 14.0)) == "5.4");
  CHECK(format_rate(annualize(77.0, 16.0)) == "4.8");
  // Per-year effects 1.0 and 4.4 over 14 years against a total of 75 per 1000.
  const std::vector<double> overall(10, 0.075), x(10, 0.014), beta(10, 0.0616);
  const auto cx = summarize_component("x_effect", x, overall, 14.0);
  const auto cb = summarize_component("beta_effect", beta, overall, 14.0);
  CHECK(format_rate(cx.per_year) == "1.0");
  CHECK(format_rate(cb.per_year) == "4.4");
  CHECK(format_percent(cx.percent) == "18");
  CHECK(format_percent(cb.percent) == "82");
  CHECK(cx.significant);
}

TEST_CASE("a covariate effect can oppose the total") {
  // Survey 2 has a worse covariate mix, so its x-effect is negative while
  // the coefficients carry more than the whole decline.
  std::mt19937_64 rng(12);
  auto d1 = random_design(rng, 100, {1});
  auto d2 = d1;
  d2.values.col(1).array() += 0.5;
  Eigen::VectorXd b1(2), b2(2);
  b1 << -1.0, 0.6;
  b2 << -1.6, 0.6;
  const auto o = overall_decompose(d1, d2, md(b1), md(b2));
  CHECK(o.overall_diff > 0.0);
  CHECK(o.x_effect < 0.0);
  CHECK(o.beta_effect > o.overall_diff);
  const auto c = summarize_component("x", std::vector<double>{o.x_effect},
                                     std::vector<double>{o.overall_diff}, 10.0);
  CHECK(c.percent < 0.0);
}

TEST_CASE("invalid posterior inputs are rejected") {
  std::mt19937_64 rng(13);
  const auto d = random_design(rng, 20, {1});
  const auto p1 = random_draws(rng, d, 10);
  const auto p2 = random_draws(rng, d, 12);
  CHECK_THROWS_AS(posterior_decompose(d, d, p1, p2, all_groups(d), 5.0), InvalidArgument);
  CHECK_THROWS_AS(posterior_decompose(d, d, p1, p1, all_groups(d), 0.0), InvalidArgument);
  CHECK_THROWS_AS(annualize(1.0, -2.0), InvalidArgument);
}

TEST_CASE("type 7 quantiles") {
  const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 1.0) == 4.0);
  CHECK(quantile(v, 0.5) == 2.5);
  CHECK(quantile(v, 0.25) == doctest::Approx(1.75));
}
