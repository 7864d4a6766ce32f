#include "elmdecomp/synthesize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "elmdecomp/error.hpp"
#include "elmdecomp/normal.hpp"
#include "elmdecomp/rng.hpp"

namespace elm {

std::map<std::string, CovariateLaw> default_laws() {
  using F = CovariateLaw::Family;
  return {
      {"maternal_age", {F::normal, 27.0, 6.0, 15.0, 45.0, true}},
      {"maternal_education", {F::normal, 5.0, 4.0, 0.0, 20.0, true}},
      {"birth_order", {F::poisson_plus_one, 2.0, 0.0, 1.0, 15.0, true}},
      {"birth_interval", {F::normal, 32.0, 14.0, 9.0, 120.0, true}},
      {"wealth_rank", {F::uniform, 0.0, 1.0, 0.0, 1.0, false}},
      {"sex", {F::bernoulli, 0.51, 0.0, 0.0, 1.0, false}},
      {"residence", {F::bernoulli, 0.3, 0.0, 0.0, 1.0, false}},
  };
}

namespace {

double draw(const CovariateLaw& law, Rng& rng) {
  double v = 0.0;
  switch (law.family) {
    case CovariateLaw::Family::uniform:
      v = std::uniform_real_distribution<double>(law.a, law.b)(rng);
      break;
    case CovariateLaw::Family::normal:
      v = std::normal_distribution<double>(law.a, law.b)(rng);
      break;
    case CovariateLaw::Family::poisson_plus_one:
      v = 1.0 + static_cast<double>(std::poisson_distribution<int>(law.a)(rng));
      break;
    case CovariateLaw::Family::bernoulli:
      v = std::bernoulli_distribution(law.a)(rng) ? 1.0 : 0.0;
      break;
  }
  v = std::clamp(v, law.lower, law.upper);
  if (law.round) v = std::round(v);
  return v;
}

std::vector<std::vector<BirthRecord>> draw_covariates(const SurveyDgp& dgp, SurveyId id,
                                                      Rng& rng) {
  auto laws = default_laws();
  for (const auto& [name, law] : dgp.covariates) {
    if (!laws.contains(name))
      throw InvalidArgument("synthesize", "unknown covariate '" + name + "' in DGP");
    laws[name] = law;
  }
  std::vector<std::vector<BirthRecord>> clusters(static_cast<std::size_t>(dgp.clusters));
  char buf[32];
  for (int j = 0; j < dgp.clusters; ++j) {
    std::snprintf(buf, sizeof buf, "%s-c%04d", std::string(to_string(id)).c_str(), j + 1);
    for (int i = 0; i < dgp.births_per_cluster; ++i) {
      BirthRecord r;
      r.survey_id = id;
      r.cluster_id = buf;
      r.maternal_age = draw(laws["maternal_age"], rng);
      r.maternal_education = draw(laws["maternal_education"], rng);
      r.birth_order = static_cast<int>(draw(laws["birth_order"], rng));
      const double interval = draw(laws["birth_interval"], rng);
      if (r.birth_order > 1) r.birth_interval = interval;
      r.wealth_rank = draw(laws["wealth_rank"], rng);
      r.sex = draw(laws["sex"], rng) > 0.5 ? Sex::male : Sex::female;
      r.residence = draw(laws["residence"], rng) > 0.5 ? Residence::urban : Residence::rural;
      clusters[static_cast<std::size_t>(j)].push_back(std::move(r));
    }
  }
  return clusters;
}

SurveySample assemble(const std::vector<std::vector<BirthRecord>>& clusters, SurveyId id, int year) {
  SurveySample s(id, year);
  for (const auto& c : clusters)
    for (const auto& r : c) s.add(r);
  return s;
}

}  // namespace

std::pair<SurveySample, SurveySample> synthesize(const DgpConfig& dgp, std::uint64_t seed) {
  const SurveyId ids[2] = {SurveyId::S1, SurveyId::S2};
  for (const auto& s : dgp.surveys) {
    if (s.clusters <= 0) throw InvalidArgument("synthesize", "cluster count must be positive");
    if (s.births_per_cluster <= 0)
      throw InvalidArgument("synthesize", "births per cluster must be positive");
    if (!(s.sigma2 >= 0.0)) throw InvalidArgument("synthesize", "sigma2 must be >= 0");
  }

  std::vector<std::vector<BirthRecord>> covariates[2];
  SurveySample samples[2];
  for (int k = 0; k < 2; ++k) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(k));
    covariates[k] = draw_covariates(dgp.surveys[k], ids[k], rng);
    samples[k] = assemble(covariates[k], ids[k], dgp.surveys[k].survey_year);
  }

  const auto centering = compute_centering(samples[0], dgp.schema, dgp.poor_quantile);
  const auto basis = make_basis(pool(samples[0], samples[1]), dgp.schema, centering);

  for (int k = 0; k < 2; ++k) {
    const auto& sdgp = dgp.surveys[k];
    const auto design = build_design(samples[k], basis);
    if (static_cast<Eigen::Index>(sdgp.beta.size()) != design.cols())
      throw InvalidArgument("synthesize", "DGP beta for " + std::string(to_string(ids[k])) +
                                              " has " + std::to_string(sdgp.beta.size()) +
                                              " entries; the design has " +
                                              std::to_string(design.cols()) + " columns");
    const Eigen::Map<const Eigen::VectorXd> beta(sdgp.beta.data(),
                                                 static_cast<Eigen::Index>(sdgp.beta.size()));
    const Eigen::VectorXd eta = design.values * beta;

    Rng rng = make_stream(seed, static_cast<std::uint64_t>(2 + k));
    std::normal_distribution<double> effect(0.0, std::sqrt(sdgp.sigma2));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::Index row = 0;
    for (auto& cluster : covariates[k]) {
      const double gamma = sdgp.sigma2 > 0.0 ? effect(rng) : 0.0;
      for (auto& r : cluster) {
        const double p = norm_cdf(eta[row++] + gamma);
        if (!(p > 0.0 && p < 1.0))
          throw InvalidArgument("synthesize", "DGP implies a death probability outside (0, 1)");
        r.outcome = unif(rng) < p ? 1 : 0;
      }
    }
    samples[k] = assemble(covariates[k], ids[k], sdgp.survey_year);
  }
  return {std::move(samples[0]), std::move(samples[1])};
}

}  // namespace elm
