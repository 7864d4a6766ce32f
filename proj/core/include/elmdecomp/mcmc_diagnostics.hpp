#pragma once

#include <span>
#include <string>
#include <vector>

#include "elmdecomp/sampler.hpp"

namespace elm {

inline constexpr int kMaxAcfLag = 50;

struct ParameterDiagnostics {
  std::string name;
  double ess = 0.0;
  std::vector<double> acf;  // lags 1..kMaxAcfLag (shorter if the trace is)
  bool degenerate = false;  // constant trace
};

struct FitDiagnostics {
  std::vector<ParameterDiagnostics> parameters;  // beta_0..beta_{p-1}, sigma2
  double acceptance_rate = 1.0;                  // Gibbs
  double min_ess = 0.0;
  int draws = 0;

  // Retained draws >= 1250 and min ESS >= 1000.
  bool meets_independence_target(int target_draws = 1250, double min_ess_target = 1000.0) const;
};

/// Autocorrelations at lags 1..max_lag by direct summation (biased, 1/L
/// normalisation).
std::vector<double> autocorrelation(std::span<const double> trace, int max_lag);

struct EssResult {
  double ess = 0.0;
  bool degenerate = false;
};

/// Geyer initial-positive-sequence ESS, capped at the trace length.
EssResult effective_sample_size(std::span<const double> trace);

FitDiagnostics diagnose(const PosteriorDraws& draws);

}  // namespace elm
