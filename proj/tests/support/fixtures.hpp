#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "elmdecomp/dataset.hpp"
#include "elmdecomp/sampler.hpp"
#include "elmdecomp/synthesize.hpp"

namespace elm::testing {

inline std::filesystem::path temp_dir(const std::string& name) {
  const char* root = std::getenv("ELMDECOMP_TEST_TMP");
  auto dir = std::filesystem::path(root ? root : std::filesystem::temp_directory_path().string()) /
             name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Design with hand-made groups: intercept + `group_sizes` groups of columns
/// named g0, g1, ... filled with uniform(-1, 1) values.
inline DesignMatrix random_design(std::mt19937_64& rng, int rows, std::vector<int> group_sizes,
                                  int clusters = 4) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int p = 1;
  for (int s : group_sizes) p += s;
  DesignMatrix d;
  d.values.resize(rows, p);
  d.column_names.push_back("intercept");
  int col = 1;
  for (std::size_t g = 0; g < group_sizes.size(); ++g) {
    const std::string name = "g" + std::to_string(g);
    d.column_groups.push_back({name, col, col + group_sizes[g]});
    for (int j = 0; j < group_sizes[g]; ++j) d.column_names.push_back(name + ":" + std::to_string(j));
    col += group_sizes[g];
  }
  for (int i = 0; i < rows; ++i) {
    d.values(i, 0) = 1.0;
    for (int c = 1; c < p; ++c) d.values(i, c) = u(rng);
    d.cluster_index.push_back(i % clusters);
  }
  for (int c = 0; c < clusters; ++c) d.cluster_ids.push_back("c" + std::to_string(c));
  d.outcome = Eigen::VectorXd::Zero(rows);
  return d;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 0.5) {
  std::normal_distribution<double> z(0.0, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = z(rng);
  return v;
}

/// Schema with p = 4 design columns: intercept, a linear education term
/// (degree-1 spline, one column), sex and residence.
inline CovariateSchema four_column_schema() {
  return CovariateSchema({{"maternal_education", CovariateKind::continuous_spline, 1, 1, {}},
                          {"sex", CovariateKind::binary, 0, 0, "female"},
                          {"residence", CovariateKind::binary, 0, 0, "rural"}});
}

/// Two-survey DGP at the recovery scale: 200 clusters x 25 births,
/// sigma2 = 0.25 in both surveys, four coefficients.
inline DgpConfig recovery_dgp(std::vector<double> beta1 = {-0.5, -0.4, 0.3, -0.25},
                              std::vector<double> beta2 = {-0.9, -0.3, 0.2, -0.15},
                              double sigma2 = 0.25) {
  DgpConfig d;
  d.schema = four_column_schema();
  const std::vector<double> betas[2] = {std::move(beta1), std::move(beta2)};
  for (int k = 0; k < 2; ++k) {
    auto& s = d.surveys[k];
    s.survey_year = k == 0 ? 2000 : 2014;
    s.beta = betas[k];
    s.sigma2 = sigma2;
    s.clusters = 200;
    s.births_per_cluster = 25;
    s.covariates["maternal_education"] = {CovariateLaw::Family::uniform, k == 0 ? 0.0 : 2.0,
                                          16.0, 0.0, 16.0, false};
    s.covariates["residence"] = {CovariateLaw::Family::bernoulli, k == 0 ? 0.4 : 0.5, 0.0,
                                 0.0, 1.0, false};
  }
  return d;
}

struct BuiltSurveys {
  SurveySample s1, s2;
  DesignBasis basis;
  DesignMatrix d1, d2;
};

inline BuiltSurveys build_both(const DgpConfig& dgp, std::uint64_t seed) {
  auto [s1, s2] = synthesize(dgp, seed);
  const auto centering = compute_centering(s1, dgp.schema, dgp.poor_quantile);
  auto basis = make_basis(pool(s1, s2), dgp.schema, centering);
  auto d1 = build_design(s1, basis);
  auto d2 = build_design(s2, basis);
  return {std::move(s1), std::move(s2), std::move(basis), std::move(d1), std::move(d2)};
}

/// Posterior draws with identical rows (no posterior variation).
inline PosteriorDraws constant_draws(const Eigen::VectorXd& beta, double sigma2, int count,
                                     const DesignMatrix& design) {
  PosteriorDraws d;
  d.beta = beta.transpose().replicate(count, 1);
  d.sigma2 = Eigen::VectorXd::Constant(count, sigma2);
  d.column_names = design.column_names;
  d.column_groups = design.column_groups;
  return d;
}

}  // namespace elm::testing
