#include "elmdecomp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "elmdecomp/decompose.hpp"
#include "elmdecomp/error.hpp"
#include "elmdecomp/normal.hpp"
#include "elmdecomp/rng.hpp"

namespace elm::oracle {

LinearEffects linear_oracle(const Eigen::VectorXd& xbar1, const Eigen::VectorXd& xbar2,
                            const Eigen::VectorXd& beta1, const Eigen::VectorXd& beta2) {
  const auto n = xbar1.size();
  if (xbar2.size() != n || beta1.size() != n || beta2.size() != n)
    throw InvalidArgument("diagnostics", "linear oracle inputs differ in length");
  return {(xbar1 - xbar2).dot(beta1), xbar2.dot(beta1 - beta2)};
}

MonteCarloEstimate mc_marginalization_oracle(const Eigen::VectorXd& beta, double sigma2,
                                             const Eigen::VectorXd& x, long draws,
                                             std::uint64_t seed) {
  if (draws < 10000) throw InvalidArgument("diagnostics", "Monte-Carlo oracle needs >= 1e4 draws");
  if (!(sigma2 >= 0.0)) throw InvalidArgument("diagnostics", "sigma2 must be >= 0");
  if (x.size() != beta.size()) throw InvalidArgument("diagnostics", "x and beta differ in length");
  const double eta = x.dot(beta);
  if (sigma2 == 0.0) return {norm_cdf(eta), 0.0};

  Rng rng = make_stream(seed, 0x6d63);
  std::normal_distribution<double> effect(0.0, std::sqrt(sigma2));
  // Welford running mean and variance.
  double mean = 0.0, m2 = 0.0;
  for (long m = 1; m <= draws; ++m) {
    const double v = norm_cdf(eta + effect(rng));
    const double delta = v - mean;
    mean += delta / static_cast<double>(m);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(draws - 1);
  return {mean, std::sqrt(var / static_cast<double>(draws))};
}

namespace {

// phi(t) / Phi(t), stable for very negative t.
double inverse_mills(double t) {
  if (t > -30.0) return norm_pdf(t) / norm_cdf(t);
  const double u = 1.0 / (t * t);
  return -t / (1.0 - u + 3.0 * u * u - 15.0 * u * u * u);
}

double log_norm_cdf(double t) {
  if (t > -30.0) return std::log(norm_cdf(t));
  const double u = 1.0 / (t * t);
  return -0.5 * t * t - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(-t) +
         std::log(1.0 - u + 3.0 * u * u - 15.0 * u * u * u);
}

double log_likelihood(const DesignMatrix& d, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = d.values * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    ll += d.outcome[i] > 0.5 ? log_norm_cdf(eta[i]) : log_norm_cdf(-eta[i]);
  return ll;
}

}  // namespace

ProbitMle ml_probit_fit(const DesignMatrix& design) {
  constexpr int kMaxIterations = 100;
  constexpr double kGradientTolerance = 1e-8;
  constexpr double kStepTolerance = 1e-10;
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (n == 0) throw InvalidArgument("diagnostics", "empty design");

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  beta[0] = norm_quantile(std::clamp(design.outcome.mean(), 1e-6, 1.0 - 1e-6));
  double ll = log_likelihood(design, beta);

  Eigen::VectorXd grad(p);
  Eigen::MatrixXd info(p, p);
  Eigen::VectorXd score(n);
  Eigen::VectorXd curvature(n);
  for (int it = 0; it <= kMaxIterations; ++it) {
    const Eigen::VectorXd eta = design.values * beta;
    // Score and negative second derivative of each row's log-likelihood with
    // respect to its linear predictor.
    for (Eigen::Index i = 0; i < n; ++i) {
      if (design.outcome[i] > 0.5) {
        const double lam = inverse_mills(eta[i]);
        score[i] = lam;
        curvature[i] = lam * (eta[i] + lam);
      } else {
        const double lam = inverse_mills(-eta[i]);
        score[i] = -lam;
        curvature[i] = lam * (lam - eta[i]);
      }
    }
    grad.noalias() = design.values.transpose() * score;
    info.noalias() = design.values.transpose() * curvature.asDiagonal() * design.values;

    const Eigen::VectorXd step = info.ldlt().solve(grad);
    // At large N the summed score stalls at rounding level; a vanishing
    // Newton step is then the usable stopping rule.
    if (grad.lpNorm<Eigen::Infinity>() < kGradientTolerance ||
        step.lpNorm<Eigen::Infinity>() < kStepTolerance * (1.0 + beta.lpNorm<Eigen::Infinity>())) {
      ProbitMle out;
      out.beta = beta;
      out.iterations = it;
      const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
      out.standard_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
      return out;
    }
    if (it == kMaxIterations) break;

    double scale = 1.0;
    Eigen::VectorXd candidate = beta + step;
    double cand_ll = log_likelihood(design, candidate);
    // Near the optimum the summed log-likelihood changes by less than its
    // own rounding error, so ties within that noise accept the full step.
    const double noise = 1e-13 * (1.0 + std::abs(ll)) * std::sqrt(static_cast<double>(n));
    for (int half = 0; half < 40 && !(cand_ll >= ll - noise); ++half) {
      scale *= 0.5;
      candidate = beta + scale * step;
      cand_ll = log_likelihood(design, candidate);
    }
    if (!std::isfinite(cand_ll)) break;
    beta = candidate;
    ll = cand_ll;
  }
  throw NonConvergenceError("probit maximum likelihood did not converge within 100 iterations",
                            std::vector<double>(beta.data(), beta.data() + beta.size()));
}

namespace {

double sample_variance(const Eigen::VectorXd& v) {
  if (v.size() < 2 || v.minCoeff() == v.maxCoeff()) return 0.0;
  const double mean = v.mean();
  return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

}  // namespace

VarianceCollapseProfile variance_collapse(const Eigen::MatrixXd& group_effects,
                                          const Eigen::VectorXd& beta_effect,
                                          const std::vector<std::string>& order) {
  if (group_effects.cols() != static_cast<Eigen::Index>(order.size()) ||
      group_effects.rows() != beta_effect.size())
    throw InvalidArgument("diagnostics", "group effects do not match the order or draw count");
  VarianceCollapseProfile prof;
  prof.order = order;
  const Eigen::Index draws = group_effects.rows();
  const Eigen::Index k = group_effects.cols();

  Eigen::VectorXd partial = Eigen::VectorXd::Zero(draws);
  for (Eigen::Index m = 0; m < k; ++m) {
    partial += group_effects.col(m);
    prof.entries.push_back({static_cast<int>(m + 1), order[static_cast<std::size_t>(m)],
                            sample_variance(partial)});
  }
  prof.final_variance = prof.entries.empty() ? 0.0 : prof.entries.back().partial_sum_variance;
  prof.beta_effect_variance = sample_variance(beta_effect);

  // Undefined correlations (a constant column) are reported as 0.
  prof.correlation = Eigen::MatrixXd::Identity(k, k);
  if (draws >= 2) {
    const Eigen::MatrixXd centered = group_effects.rowwise() - group_effects.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(draws - 1);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) {
        if (a == b) continue;
        const double denom = std::sqrt(cov(a, a) * cov(b, b));
        prof.correlation(a, b) = denom > 0.0 ? std::clamp(cov(a, b) / denom, -1.0, 1.0) : 0.0;
      }
  }
  return prof;
}

VarianceCollapseProfile variance_collapse(const DesignMatrix& design2,
                                          const PosteriorDraws& draws1,
                                          const PosteriorDraws& draws2,
                                          const std::vector<std::string>& order,
                                          Marginalization convention) {
  if (draws1.size() != draws2.size())
    throw InvalidArgument("diagnostics", "surveys have different numbers of posterior draws");
  if (draws1.size() == 0) throw InvalidArgument("diagnostics", "no posterior draws");
  const Eigen::Index n = draws1.size();
  Eigen::MatrixXd groups(n, static_cast<Eigen::Index>(order.size()));
  Eigen::VectorXd beta_effect(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    const auto b1 = marginalize(draws1, l, convention);
    const auto b2 = marginalize(draws2, l, convention);
    const auto effects = coefficient_decompose(design2, b1, b2, order);
    for (std::size_t g = 0; g < effects.size(); ++g)
      groups(l, static_cast<Eigen::Index>(g)) = effects[g].effect;
    beta_effect[l] = mean_probability(design2, b1.beta) - mean_probability(design2, b2.beta);
  }
  return variance_collapse(groups, beta_effect, order);
}

}  // namespace elm::oracle
