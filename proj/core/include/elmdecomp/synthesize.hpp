#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "elmdecomp/dataset.hpp"

namespace elm {

/// Marginal law for one generated covariate.
struct CovariateLaw {
  enum class Family { uniform, normal, poisson_plus_one, bernoulli };
  Family family = Family::uniform;
  double a = 0.0;  // uniform: lower; normal: mean; poisson: rate; bernoulli: P(male) or P(urban)
  double b = 1.0;  // uniform: upper; normal: sd
  double lower = -1e300;  // clamp range applied after drawing
  double upper = 1e300;
  bool round = false;     // round to an integer after clamping

  friend bool operator==(const CovariateLaw&, const CovariateLaw&) = default;
};

struct SurveyDgp {
  int survey_year = 0;
  std::vector<double> beta;  // conditional coefficients, one per design column
  double sigma2 = 0.0;       // cluster-effect variance
  int clusters = 100;
  int births_per_cluster = 25;
  // Overrides of default_laws(); keys are covariate names. Birth interval is
  // generated only for births with birth_order > 1.
  std::map<std::string, CovariateLaw> covariates;
};

struct DgpConfig {
  CovariateSchema schema;
  std::array<SurveyDgp, 2> surveys;
  double poor_quantile = 0.2;
};

/// Default laws for every record field. Maternal age is drawn inside [15, 45].
std::map<std::string, CovariateLaw> default_laws();

/// Two surveys drawn from the hierarchical probit model. Covariates are
/// generated first, the shared design is built (centering from survey 1,
/// knots from the pooled draw), then cluster effects and outcomes are drawn
/// so that `beta` refers to the same columns a later fit estimates.
/// Deterministic given `seed`.
std::pair<SurveySample, SurveySample> synthesize(const DgpConfig& dgp, std::uint64_t seed);

}  // namespace elm
