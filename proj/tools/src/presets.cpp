#include "elmdecomp_cli/presets.hpp"

namespace elm::cli {

CovariateSchema four_column_schema() {
  return CovariateSchema({{"maternal_education", CovariateKind::continuous_spline, 1, 1, {}},
                          {"sex", CovariateKind::binary, 0, 0, "female"},
                          {"residence", CovariateKind::binary, 0, 0, "rural"}});
}

DgpConfig four_column_dgp(std::vector<double> beta1, std::vector<double> beta2, double sigma2,
                          int clusters, int births) {
  DgpConfig d;
  d.schema = four_column_schema();
  std::vector<double>* betas[2] = {&beta1, &beta2};
  for (int k = 0; k < 2; ++k) {
    auto& s = d.surveys[k];
    s.survey_year = k == 0 ? 2000 : 2014;
    s.beta = *betas[k];
    s.sigma2 = sigma2;
    s.clusters = clusters;
    s.births_per_cluster = births;
    // Wide and clamped, so the sample has heaps at no schooling and at the
    // cap as well as a spread in between.
    s.covariates["maternal_education"] = {CovariateLaw::Family::normal, k == 0 ? 6.0 : 9.0, 8.0,
                                          0.0, 16.0, false};
    s.covariates["residence"] = {CovariateLaw::Family::bernoulli, k == 0 ? 0.4 : 0.5, 0.0, 0.0, 1.0,
                                 false};
  }
  return d;
}

BuiltDesigns build_designs(SurveySample s1, SurveySample s2, const CovariateSchema& schema,
                           double poor_quantile) {
  const auto centering = compute_centering(s1, schema, poor_quantile);
  auto basis = make_basis(pool(s1, s2), schema, centering);
  auto d1 = build_design(s1, basis);
  auto d2 = build_design(s2, basis);
  return {std::move(s1), std::move(s2), std::move(basis), std::move(d1), std::move(d2)};
}

DesignMatrix fuzz_design(std::mt19937_64& rng, int rows, const std::vector<int>& group_sizes) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int p = 1;
  for (int s : group_sizes) p += s;
  DesignMatrix d;
  d.values.resize(rows, p);
  d.column_names.emplace_back(kIntercept);
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
    d.cluster_index.push_back(i % 2);
  }
  d.cluster_ids = {"a", "b"};
  d.outcome = Eigen::VectorXd::Zero(rows);
  return d;
}

Eigen::VectorXd fuzz_vector(std::mt19937_64& rng, Eigen::Index n, double sd) {
  std::normal_distribution<double> z(0.0, sd);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = z(rng);
  return v;
}

}  // namespace elm::cli
