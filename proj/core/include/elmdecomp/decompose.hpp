#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "elmdecomp/dataset.hpp"
#include "elmdecomp/marginal.hpp"
#include "elmdecomp/sampler.hpp"

namespace elm {

// Link used inside the decomposition. `identity` exists so the nonlinear
// code path can be checked against the closed-form linear decomposition.
enum class Link { probit, identity };

struct OverallEffects {
  double overall_diff = 0.0;  // mean rate S1 - mean rate S2
  double x_effect = 0.0;
  double beta_effect = 0.0;
};

struct GroupEffect {
  std::string group;
  double effect = 0.0;
};

/// Covariate-distribution and coefficient effects for one pair of marginal
/// coefficient vectors. Positive values are declines from S1 to S2.
OverallEffects overall_decompose(const DesignMatrix& design1, const DesignMatrix& design2,
                                 const MarginalDraw& beta1, const MarginalDraw& beta2,
                                 Link link = Link::probit);

/// Sequential coefficient swaps over survey 2's covariates: starting from
/// beta1, replace one column group at a time with beta2's values in `order`;
/// each effect is the drop in the mean predicted rate caused by that swap.
std::vector<GroupEffect> coefficient_decompose(const DesignMatrix& design2,
                                               const MarginalDraw& beta1,
                                               const MarginalDraw& beta2,
                                               const std::vector<std::string>& order,
                                               Link link = Link::probit);

/// Default order: intercept, wealth, education, age, birth order, birth
/// interval, sex, residence, restricted to the groups present.
std::vector<std::string> default_order(const DesignMatrix& design);

/// Per-draw decomposition of every posterior draw pair.
struct DecompositionDraws {
  std::vector<std::string> order;
  Eigen::VectorXd rate1;  // mean marginal rate, survey 1
  Eigen::VectorXd rate2;
  Eigen::VectorXd overall_diff;
  Eigen::VectorXd x_effect;
  Eigen::VectorXd beta_effect;
  Eigen::MatrixXd group_effects;  // L x groups, columns follow `order`
};

struct ComponentSummary {
  std::string name;
  double mean = 0.0;  // probability units
  double lower = 0.0;
  double upper = 0.0;
  double per_year = 0.0;  // per 1000 births per year
  double per_year_lower = 0.0;
  double per_year_upper = 0.0;
  double percent = 0.0;  // 100 * mean / mean(overall_diff)
  double percent_lower = 0.0;
  double percent_upper = 0.0;
  bool significant = false;  // 0 outside [lower, upper]
};

struct MortalitySummary {
  IntervalSummary s1;  // per 1000
  IntervalSummary s2;
  IntervalSummary diff;
  IntervalSummary diff_per_year;
};

struct DecompositionSummary {
  double years_between = 0.0;
  MortalitySummary mortality;
  ComponentSummary overall_diff;
  ComponentSummary x_effect;
  ComponentSummary beta_effect;
  std::vector<ComponentSummary> groups;  // in decomposition order
};

struct DecompositionResult {
  DecompositionDraws draws;
  DecompositionSummary summary;
};

DecompositionDraws decompose_draws(const DesignMatrix& design1, const DesignMatrix& design2,
                                   const PosteriorDraws& draws1, const PosteriorDraws& draws2,
                                   const std::vector<std::string>& order,
                                   Marginalization convention = Marginalization::appendix_divide);

DecompositionResult posterior_decompose(const DesignMatrix& design1, const DesignMatrix& design2,
                                        const PosteriorDraws& draws1, const PosteriorDraws& draws2,
                                        const std::vector<std::string>& order,
                                        double years_between,
                                        Marginalization convention = Marginalization::appendix_divide);

/// Summary of one component given its per-draw values and the per-draw
/// overall difference.
ComponentSummary summarize_component(std::string name, std::span<const double> values,
                                     std::span<const double> overall, double years_between);

DecompositionSummary summarize(const DecompositionDraws& draws, double years_between);

/// Rate difference per 1000 births spread over the years between surveys.
double annualize(double total_diff_per_1000, double years_between);

/// Percentile with linear interpolation between order statistics.
double quantile(std::span<const double> values, double q);

IntervalSummary interval_summary(std::span<const double> values, double scale = 1.0);

}  // namespace elm
