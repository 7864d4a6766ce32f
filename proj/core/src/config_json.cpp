#include "elmdecomp/config_json.hpp"

#include <set>

#include "elmdecomp/error.hpp"

namespace elm {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* context) {
  if (!j.is_object()) throw InvalidArgument("config", std::string(context) + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items())
    if (!ok.contains(key))
      throw InvalidArgument("config", "unknown key '" + key + "' in " + context);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument("config", std::string("bad value for '") + key + "'");
  }
}

}  // namespace

CovariateSchema schema_from_json(const json& j) {
  const json& list = j.is_object() && j.contains("covariates") ? j.at("covariates") : j;
  if (!list.is_array()) throw InvalidArgument("config", "schema must be an array of covariates");
  std::vector<CovariateSpec> specs;
  for (const auto& c : list) {
    check_keys(c, {"name", "kind", "degree", "df", "reference"}, "schema covariate");
    CovariateSpec s;
    s.name = get_or<std::string>(c, "name", "");
    const auto kind = get_or<std::string>(c, "kind", is_binary_covariate(s.name) ? "binary"
                                                                                : "continuous_spline");
    if (kind == "binary") {
      s.kind = CovariateKind::binary;
      s.degree = 0;
      s.df = 0;
      s.reference = get_or<std::string>(c, "reference", s.name == "sex" ? "female" : "rural");
    } else if (kind == "continuous_spline") {
      s.kind = CovariateKind::continuous_spline;
      s.degree = get_or<int>(c, "degree", 3);
      s.df = get_or<int>(c, "df", 4);
    } else {
      throw InvalidArgument("config", "covariate kind must be continuous_spline or binary");
    }
    specs.push_back(std::move(s));
  }
  return CovariateSchema(std::move(specs));
}

json to_json(const CovariateSchema& schema) {
  json arr = json::array();
  for (const auto& s : schema.specs()) {
    if (s.kind == CovariateKind::binary)
      arr.push_back({{"name", s.name}, {"kind", "binary"}, {"reference", s.reference}});
    else
      arr.push_back(
          {{"name", s.name}, {"kind", "continuous_spline"}, {"degree", s.degree}, {"df", s.df}});
  }
  return arr;
}

PriorSpec prior_from_json(const json& j) {
  check_keys(j, {"beta_sd", "sigma2_shape", "sigma2_scale"}, "prior");
  PriorSpec p;
  p.beta_sd = get_or(j, "beta_sd", p.beta_sd);
  p.sigma2_shape = get_or(j, "sigma2_shape", p.sigma2_shape);
  p.sigma2_scale = get_or(j, "sigma2_scale", p.sigma2_scale);
  p.validate();
  return p;
}

json to_json(const PriorSpec& p) {
  return {{"beta_sd", p.beta_sd}, {"sigma2_shape", p.sigma2_shape}, {"sigma2_scale", p.sigma2_scale}};
}

McmcConfig mcmc_from_json(const json& j) {
  check_keys(j, {"iterations", "burn_in", "thin", "target_draws", "allow_fewer", "seed", "chain"},
             "mcmc");
  McmcConfig c;
  c.iterations = get_or(j, "iterations", c.iterations);
  c.burn_in = get_or(j, "burn_in", c.burn_in);
  c.thin = get_or(j, "thin", c.thin);
  c.target_draws = get_or(j, "target_draws", c.target_draws);
  c.allow_fewer = get_or(j, "allow_fewer", c.allow_fewer);
  c.seed = get_or(j, "seed", c.seed);
  c.chain = get_or(j, "chain", c.chain);
  c.validate();
  return c;
}

json to_json(const McmcConfig& c) {
  return {{"iterations", c.iterations},     {"burn_in", c.burn_in},
          {"thin", c.thin},                 {"effective_thin", c.effective_thin()},
          {"target_draws", c.target_draws}, {"allow_fewer", c.allow_fewer},
          {"seed", c.seed},                 {"chain", c.chain}};
}

CovariateLaw law_from_json(const json& j) {
  check_keys(j, {"family", "a", "b", "lower", "upper", "round"}, "covariate law");
  CovariateLaw law;
  const auto family = get_or<std::string>(j, "family", "uniform");
  if (family == "uniform") law.family = CovariateLaw::Family::uniform;
  else if (family == "normal") law.family = CovariateLaw::Family::normal;
  else if (family == "poisson_plus_one") law.family = CovariateLaw::Family::poisson_plus_one;
  else if (family == "bernoulli") law.family = CovariateLaw::Family::bernoulli;
  else throw InvalidArgument("config", "unknown covariate law family '" + family + "'");
  law.a = get_or(j, "a", law.a);
  law.b = get_or(j, "b", law.b);
  law.lower = get_or(j, "lower", law.lower);
  law.upper = get_or(j, "upper", law.upper);
  law.round = get_or(j, "round", law.round);
  return law;
}

json to_json(const CovariateLaw& law) {
  static const char* names[] = {"uniform", "normal", "poisson_plus_one", "bernoulli"};
  return {{"family", names[static_cast<int>(law.family)]},
          {"a", law.a},
          {"b", law.b},
          {"lower", law.lower},
          {"upper", law.upper},
          {"round", law.round}};
}

DgpConfig dgp_from_json(const json& j, const CovariateSchema& schema) {
  check_keys(j, {"surveys", "poor_quantile"}, "synthetic DGP");
  DgpConfig d;
  d.schema = schema;
  d.poor_quantile = get_or(j, "poor_quantile", d.poor_quantile);
  const auto& surveys = j.at("surveys");
  if (!surveys.is_array() || surveys.size() != 2)
    throw InvalidArgument("config", "synthetic DGP needs exactly two surveys");
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& s = surveys[k];
    check_keys(s, {"survey_year", "beta", "sigma2", "clusters", "births_per_cluster", "covariates"},
               "synthetic survey");
    auto& out = d.surveys[k];
    out.survey_year = get_or(s, "survey_year", 0);
    out.beta = get_or(s, "beta", std::vector<double>{});
    out.sigma2 = get_or(s, "sigma2", 0.0);
    out.clusters = get_or(s, "clusters", out.clusters);
    out.births_per_cluster = get_or(s, "births_per_cluster", out.births_per_cluster);
    if (s.contains("covariates"))
      for (const auto& [name, law] : s.at("covariates").items()) out.covariates[name] = law_from_json(law);
  }
  return d;
}

json to_json(const DgpConfig& d) {
  json surveys = json::array();
  for (const auto& s : d.surveys) {
    json cov = json::object();
    for (const auto& [name, law] : s.covariates) cov[name] = to_json(law);
    surveys.push_back({{"survey_year", s.survey_year},
                       {"beta", s.beta},
                       {"sigma2", s.sigma2},
                       {"clusters", s.clusters},
                       {"births_per_cluster", s.births_per_cluster},
                       {"covariates", cov}});
  }
  return {{"surveys", surveys}, {"poor_quantile", d.poor_quantile}};
}

json to_json(const CenteringConstants& c) {
  return {{"means", c.means}, {"fallback", c.fallback}};
}

json to_json(const FitDiagnostics& d) {
  json params = json::array();
  for (const auto& p : d.parameters)
    params.push_back({{"name", p.name}, {"ess", p.ess}, {"acf", p.acf}, {"degenerate", p.degenerate}});
  return {{"parameters", params},
          {"acceptance_rate", d.acceptance_rate},
          {"min_ess", d.min_ess},
          {"draws", d.draws},
          {"meets_independence_target", d.meets_independence_target()}};
}

}  // namespace elm
