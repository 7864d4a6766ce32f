#include "elmdecomp/mcmc_diagnostics.hpp"

#include <algorithm>
#include <limits>

#include "elmdecomp/error.hpp"

namespace elm {

namespace {

struct Centered {
  std::vector<double> values;
  double c0 = 0.0;  // lag-0 autocovariance, 1/L normalised
};

Centered center(std::span<const double> trace) {
  Centered c;
  const auto n = static_cast<double>(trace.size());
  double mean = 0.0;
  for (double v : trace) mean += v;
  mean /= n;
  c.values.reserve(trace.size());
  for (double v : trace) c.values.push_back(v - mean);
  for (double v : c.values) c.c0 += v * v;
  c.c0 /= n;
  return c;
}

double lag_correlation(const Centered& c, std::size_t lag) {
  const std::size_t n = c.values.size();
  double s = 0.0;
  for (std::size_t t = 0; t + lag < n; ++t) s += c.values[t] * c.values[t + lag];
  return std::clamp(s / static_cast<double>(n) / c.c0, -1.0, 1.0);
}

}  // namespace

std::vector<double> autocorrelation(std::span<const double> trace, int max_lag) {
  if (trace.size() < 2) return {};
  const auto c = center(trace);
  const auto lags = std::min<std::size_t>(static_cast<std::size_t>(std::max(max_lag, 0)),
                                          trace.size() - 1);
  std::vector<double> out(lags, 0.0);
  if (!(c.c0 > 0.0)) return out;
  for (std::size_t k = 1; k <= lags; ++k) out[k - 1] = lag_correlation(c, k);
  return out;
}

EssResult effective_sample_size(std::span<const double> trace) {
  const auto n = trace.size();
  if (n < 2) return {static_cast<double>(n), true};
  const auto c = center(trace);
  if (!(c.c0 > 1e-300)) return {static_cast<double>(n), true};

  // Sum consecutive autocorrelation pairs while they stay positive.
  double tau = -1.0;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    const double even = k == 0 ? 1.0 : lag_correlation(c, 2 * k);
    const double pair = even + lag_correlation(c, 2 * k + 1);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  const double len = static_cast<double>(n);
  const double ess = tau > 1.0 ? len / tau : len;
  return {ess, false};
}

bool FitDiagnostics::meets_independence_target(int target_draws, double min_ess_target) const {
  return draws >= target_draws && min_ess >= min_ess_target;
}

FitDiagnostics diagnose(const PosteriorDraws& draws) {
  if (draws.size() < 100)
    throw InvalidArgument("sampler", "diagnostics need at least 100 retained draws");
  FitDiagnostics d;
  d.draws = static_cast<int>(draws.size());
  d.min_ess = std::numeric_limits<double>::infinity();

  auto add = [&](std::string name, std::span<const double> trace) {
    ParameterDiagnostics pd;
    pd.name = std::move(name);
    const auto ess = effective_sample_size(trace);
    pd.ess = ess.ess;
    pd.degenerate = ess.degenerate;
    pd.acf = autocorrelation(trace, kMaxAcfLag);
    d.min_ess = std::min(d.min_ess, pd.ess);
    d.parameters.push_back(std::move(pd));
  };

  std::vector<double> trace(static_cast<std::size_t>(draws.size()));
  for (Eigen::Index k = 0; k < draws.coefficients(); ++k) {
    for (Eigen::Index l = 0; l < draws.size(); ++l) trace[static_cast<std::size_t>(l)] = draws.beta(l, k);
    const auto idx = static_cast<std::size_t>(k);
    add(idx < draws.column_names.size() ? draws.column_names[idx] : "beta_" + std::to_string(k),
        trace);
  }
  add("sigma2", std::span<const double>(draws.sigma2.data(), static_cast<std::size_t>(draws.sigma2.size())));
  return d;
}

}  // namespace elm
