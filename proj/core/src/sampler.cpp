#include "elmdecomp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "elmdecomp/error.hpp"
#include "elmdecomp/normal.hpp"

namespace elm {

void PriorSpec::validate() const {
  if (!(beta_sd > 0.0)) throw InvalidArgument("sampler", "prior beta_sd must be > 0");
  if (!(sigma2_shape > 0.0)) throw InvalidArgument("sampler", "prior sigma2_shape must be > 0");
  if (!(sigma2_scale > 0.0)) throw InvalidArgument("sampler", "prior sigma2_scale must be > 0");
}

int McmcConfig::effective_thin() const {
  if (thin > 0) return thin;
  return std::max(1, (iterations - burn_in) / std::max(1, target_draws));
}

int McmcConfig::retained() const {
  if (iterations <= burn_in) return 0;
  return (iterations - burn_in) / effective_thin();
}

void McmcConfig::validate() const {
  if (iterations <= 0) throw InvalidArgument("sampler", "iterations must be positive");
  if (burn_in < 0) throw InvalidArgument("sampler", "burn_in must be >= 0");
  if (burn_in >= iterations) throw InvalidArgument("sampler", "burn_in must be below iterations");
  if (thin < 0) throw InvalidArgument("sampler", "thin must be >= 1 (or 0 for automatic)");
  if (target_draws < 1) throw InvalidArgument("sampler", "target_draws must be >= 1");
  if (retained() < 1) throw InvalidArgument("sampler", "configuration retains no draws");
  if (!allow_fewer && retained() < target_draws)
    throw InvalidArgument("sampler", "configuration retains " + std::to_string(retained()) +
                                         " draws, fewer than the target " +
                                         std::to_string(target_draws));
}

namespace {

// Uniform on the open interval (0, 1).
double open_uniform(Rng& rng) {
  double u;
  do {
    u = std::generate_canonical<double, 53>(rng);
  } while (u <= 0.0 || u >= 1.0);
  return u;
}

// Standard normal restricted to (lower, inf).
double standard_tail(double lower, Rng& rng) {
  const double p = norm_cdf(-lower);
  if (p >= 1e-10) {
    const double w = norm_quantile(open_uniform(rng) * p);
    return -w;
  }
  // Exponential rejection with the optimal rate for this truncation point.
  const double rate = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
  std::exponential_distribution<double> expo(rate);
  while (true) {
    const double x = lower + expo(rng);
    const double d = x - rate;
    if (open_uniform(rng) <= std::exp(-0.5 * d * d)) return x;
  }
}

}  // namespace

double sample_truncated_normal(double mean, double sd, TruncationSide side, Rng& rng) {
  if (!(sd > 0.0)) throw InvalidArgument("sampler", "truncated normal needs sd > 0");
  if (side == TruncationSide::right_of_zero)
    return -sample_truncated_normal(-mean, sd, TruncationSide::left_of_zero, rng);
  const double x = mean + sd * standard_tail(-mean / sd, rng);
  return x > 0.0 ? x : std::numeric_limits<double>::denorm_min();
}

namespace {

double smallest_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void check_conditioning(const Eigen::MatrixXd& precision) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(precision, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-12 * hi))
    throw NumericalError("sampler",
                         "beta full-conditional precision is singular (collinear design); "
                         "smallest eigenvalue " + std::to_string(lo),
                         lo);
}

}  // namespace

PosteriorDraws fit(const DesignMatrix& design, const PriorSpec& prior, const McmcConfig& config,
                   SurveyId survey_id) {
  prior.validate();
  config.validate();
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  const int clusters = design.clusters();
  if (clusters < 2)
    throw InvalidArgument("sampler", "at least 2 clusters are needed to identify sigma2");
  if (n == 0 || static_cast<Eigen::Index>(design.cluster_index.size()) != n ||
      design.outcome.size() != n)
    throw InvalidArgument("sampler", "design rows, outcome and cluster index disagree");

  const auto& x = design.values;
  const Eigen::MatrixXd xtx = x.transpose() * x;
  const double prior_precision = 1.0 / (prior.beta_sd * prior.beta_sd);

  // Per-cluster sizes and column sums s_j = X_j' 1.
  Eigen::VectorXd size = Eigen::VectorXd::Zero(clusters);
  Eigen::MatrixXd colsum = Eigen::MatrixXd::Zero(p, clusters);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int j = design.cluster_index[static_cast<std::size_t>(i)];
    size[j] += 1.0;
    colsum.col(j) += x.row(i).transpose();
  }

  Eigen::MatrixXd base = xtx;
  base.diagonal().array() += prior_precision;
  check_conditioning(base);

  Rng rng = make_stream(config.seed, config.chain);
  std::normal_distribution<double> stdnorm(0.0, 1.0);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  const double ybar = design.outcome.mean();
  beta[0] = norm_quantile(std::clamp(ybar, 0.01, 0.99));
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(clusters);
  double sigma2 = prior.sigma2_scale / (prior.sigma2_shape + 1.0);

  Eigen::VectorXd eta = x * beta;
  Eigen::VectorXd z(n);
  Eigen::VectorXd zsum(clusters);
  Eigen::VectorXd shrink(clusters);
  Eigen::MatrixXd precision(p, p);
  Eigen::VectorXd rhs(p);
  Eigen::VectorXd noise(p);
  Eigen::LLT<Eigen::MatrixXd> llt(p);

  const int thin = config.effective_thin();
  const int keep = config.retained();
  PosteriorDraws out;
  out.survey_id = survey_id;
  out.beta.resize(keep, p);
  out.sigma2.resize(keep);
  out.column_names = design.column_names;
  out.column_groups = design.column_groups;

  const double post_shape = prior.sigma2_shape + 0.5 * clusters;
  int stored = 0;
  for (int iter = 0; iter < config.iterations; ++iter) {
    // Latent utilities.
    zsum.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      const int j = design.cluster_index[static_cast<std::size_t>(i)];
      const double mean = eta[i] + gamma[j];
      z[i] = sample_truncated_normal(
          mean, 1.0,
          design.outcome[i] > 0.5 ? TruncationSide::left_of_zero : TruncationSide::right_of_zero,
          rng);
      zsum[j] += z[i];
    }

    // beta | z, sigma2 with the cluster effects integrated out: within
    // cluster j, Cov(z_j) = I + sigma2 11', whose inverse is
    // I - c_j 11' with c_j = sigma2 / (1 + n_j sigma2).
    for (int j = 0; j < clusters; ++j) shrink[j] = sigma2 / (1.0 + size[j] * sigma2);
    precision.noalias() = base - colsum * shrink.asDiagonal() * colsum.transpose();
    rhs.noalias() = x.transpose() * z;
    rhs.noalias() -= colsum * shrink.cwiseProduct(zsum);
    llt.compute(precision);
    if (llt.info() != Eigen::Success) {
      const double lo = smallest_eigenvalue(precision);
      throw NumericalError("sampler",
                           "beta full-conditional precision is not positive definite; "
                           "smallest eigenvalue " + std::to_string(lo),
                           lo);
    }
    for (Eigen::Index k = 0; k < p; ++k) noise[k] = stdnorm(rng);
    beta = llt.solve(rhs);
    beta += llt.matrixU().solve(noise);
    eta.noalias() = x * beta;

    // gamma_j | beta, z, sigma2.
    const Eigen::VectorXd resid = zsum - colsum.transpose() * beta;
    double ss = 0.0;
    for (int j = 0; j < clusters; ++j) {
      const double prec = size[j] + 1.0 / sigma2;
      gamma[j] = resid[j] / prec + stdnorm(rng) / std::sqrt(prec);
      ss += gamma[j] * gamma[j];
    }

    // sigma2 | gamma.
    const double post_scale = prior.sigma2_scale + 0.5 * ss;
    std::gamma_distribution<double> g(post_shape, 1.0);
    sigma2 = post_scale / g(rng);

    if (iter >= config.burn_in && (iter - config.burn_in + 1) % thin == 0 && stored < keep) {
      out.beta.row(stored) = beta.transpose();
      out.sigma2[stored] = sigma2;
      ++stored;
    }
  }
  return out;
}

}  // namespace elm
