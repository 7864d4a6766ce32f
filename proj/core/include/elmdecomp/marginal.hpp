#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "elmdecomp/dataset.hpp"
#include "elmdecomp/sampler.hpp"

namespace elm {

/// How a conditional coefficient vector is turned into a marginal one.
/// `appendix_divide` is beta / sqrt(1 + sigma^2), the value of the integral
/// over the cluster effect. `maintext_multiply` (beta * sqrt(1 + sigma^2)) is
/// kept only for sensitivity checks; it does not integrate the model.
enum class Marginalization { appendix_divide, maintext_multiply };

std::string_view to_string(Marginalization m);
Marginalization parse_marginalization(std::string_view s);

struct MarginalDraw {
  Eigen::VectorXd beta;
  Eigen::Index source = 0;  // row in the originating PosteriorDraws
};

MarginalDraw marginalize(const Eigen::VectorXd& beta, double sigma2,
                         Marginalization convention = Marginalization::appendix_divide);

MarginalDraw marginalize(const PosteriorDraws& draws, Eigen::Index index,
                         Marginalization convention = Marginalization::appendix_divide);

/// Phi(x' beta~).
double marginal_prob(const Eigen::Ref<const Eigen::VectorXd>& x, const MarginalDraw& draw);

/// Mean of Phi(X beta) over the design rows.
double mean_probability(const DesignMatrix& design, const Eigen::VectorXd& beta);

struct IntervalSummary {
  double mean = 0.0;
  double lower = 0.0;  // 2.5th percentile
  double upper = 0.0;  // 97.5th percentile
};

struct MortalityRate {
  Eigen::VectorXd per_draw;    // probability units
  IntervalSummary per_1000;
};

MortalityRate mean_mortality(const DesignMatrix& design, const PosteriorDraws& draws,
                             Marginalization convention = Marginalization::appendix_divide);

}  // namespace elm
