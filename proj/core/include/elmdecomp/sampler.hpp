#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "elmdecomp/dataset.hpp"
#include "elmdecomp/rng.hpp"

namespace elm {

/// beta_j ~ N(0, beta_sd^2) independently; sigma^2 ~ InvGamma(shape, scale).
struct PriorSpec {
  double beta_sd = 10.0;
  double sigma2_shape = 1.0;
  double sigma2_scale = 0.1;

  void validate() const;
};

struct McmcConfig {
  int iterations = 30000;
  int burn_in = 5000;
  int thin = 0;  // 0 selects floor((iterations - burn_in) / target_draws)
  int target_draws = 1250;
  bool allow_fewer = false;  // permit fewer than target_draws retained draws
  std::uint64_t seed = 1;
  std::uint64_t chain = 0;  // stream id, combined with seed

  int effective_thin() const;
  int retained() const;
  void validate() const;
};

/// Retained (beta, sigma^2) draws for one survey, one row per draw.
struct PosteriorDraws {
  SurveyId survey_id = SurveyId::S1;
  Eigen::MatrixXd beta;  // L x p
  Eigen::VectorXd sigma2;
  std::vector<std::string> column_names;
  std::vector<ColumnGroup> column_groups;

  Eigen::Index size() const { return beta.rows(); }
  Eigen::Index coefficients() const { return beta.cols(); }
};

/// Gibbs sampler for the random-intercept probit with latent-variable
/// augmentation. Each sweep draws the latent utilities from truncated
/// normals, beta jointly from its Gaussian full conditional with the cluster
/// effects integrated out, the cluster effects given beta, and sigma^2 from
/// its inverse-gamma full conditional.
PosteriorDraws fit(const DesignMatrix& design, const PriorSpec& prior, const McmcConfig& config,
                   SurveyId survey_id = SurveyId::S1);

enum class TruncationSide { left_of_zero, right_of_zero };

/// Draw from N(mean, sd^2) restricted to (0, inf) for left_of_zero and to
/// (-inf, 0) for right_of_zero. Inverse-CDF unless the admissible half-line
/// has probability below 1e-10, where exponential rejection takes over.
double sample_truncated_normal(double mean, double sd, TruncationSide side, Rng& rng);

}  // namespace elm
