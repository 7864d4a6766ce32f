#pragma once

#include <nlohmann/json.hpp>

#include "elmdecomp/dataset.hpp"
#include "elmdecomp/mcmc_diagnostics.hpp"
#include "elmdecomp/sampler.hpp"
#include "elmdecomp/synthesize.hpp"

// JSON documents whose keys mirror the configuration structs.
namespace elm {

CovariateSchema schema_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CovariateSchema& schema);

PriorSpec prior_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PriorSpec& prior);

McmcConfig mcmc_from_json(const nlohmann::json& j);
nlohmann::json to_json(const McmcConfig& config);

CovariateLaw law_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CovariateLaw& law);

/// DGP document: {"surveys": [{survey_year, beta, sigma2, clusters,
/// births_per_cluster, covariates}, {...}], "poor_quantile"}. The schema is
/// supplied separately.
DgpConfig dgp_from_json(const nlohmann::json& j, const CovariateSchema& schema);
nlohmann::json to_json(const DgpConfig& dgp);

nlohmann::json to_json(const CenteringConstants& c);
nlohmann::json to_json(const FitDiagnostics& d);

}  // namespace elm
