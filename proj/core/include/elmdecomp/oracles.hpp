#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "elmdecomp/dataset.hpp"
#include "elmdecomp/marginal.hpp"
#include "elmdecomp/sampler.hpp"

// Reference computations that check the core math along independent routes.
namespace elm::oracle {

struct LinearEffects {
  double x_effect = 0.0;
  double beta_effect = 0.0;
};

/// Closed-form linear decomposition on mean covariate vectors:
/// ((xbar1 - xbar2)' beta1, xbar2' (beta1 - beta2)).
LinearEffects linear_oracle(const Eigen::VectorXd& xbar1, const Eigen::VectorXd& xbar2,
                            const Eigen::VectorXd& beta1, const Eigen::VectorXd& beta2);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// (1/M) sum Phi(x'beta + gamma_m), gamma_m ~ N(0, sigma2).
MonteCarloEstimate mc_marginalization_oracle(const Eigen::VectorXd& beta, double sigma2,
                                             const Eigen::VectorXd& x, long draws,
                                             std::uint64_t seed);

struct ProbitMle {
  Eigen::VectorXd beta;
  Eigen::VectorXd standard_errors;  // from the inverse observed information
  int iterations = 0;
};

/// Newton-Raphson maximum-likelihood probit without random effects.
/// Converged when the gradient max-norm drops below 1e-8 or the Newton step
/// falls below 1e-10 relative to the iterate; throws
/// NonConvergenceError after 100 iterations.
ProbitMle ml_probit_fit(const DesignMatrix& design);

struct VarianceCollapseProfile {
  struct Entry {
    int terms = 0;
    std::string group_added;
    double partial_sum_variance = 0.0;
  };
  std::vector<Entry> entries;
  double final_variance = 0.0;
  double beta_effect_variance = 0.0;
  std::vector<std::string> order;
  Eigen::MatrixXd correlation;  // pairwise correlation of group effects
};

VarianceCollapseProfile variance_collapse(const DesignMatrix& design2,
                                          const PosteriorDraws& draws1,
                                          const PosteriorDraws& draws2,
                                          const std::vector<std::string>& order,
                                          Marginalization convention =
                                              Marginalization::appendix_divide);

/// Profile from already computed per-draw effects.
VarianceCollapseProfile variance_collapse(const Eigen::MatrixXd& group_effects,
                                          const Eigen::VectorXd& beta_effect,
                                          const std::vector<std::string>& order);

}  // namespace elm::oracle
