#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "elmdecomp/marginal.hpp"
#include "elmdecomp/sampler.hpp"

namespace elm::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Identity-link decomposition against the closed-form linear split on
/// random fixtures; worst absolute discrepancy must stay below `tolerance`.
CheckResult check_linear_triangle(int fixtures, std::uint64_t seed, double tolerance = 1e-12);

/// x + beta = overall and the collapsing sum of group effects, on random
/// designs, coefficients and orders.
CheckResult check_additivity(int cases, std::uint64_t seed, double tolerance = 1e-12);

/// Closed-form marginal probability under `convention` against Monte-Carlo
/// integration on the (x'beta, sigma2) grid {-2..2} x {0, 0.25, 1, 4}.
CheckResult check_mc_grid(long draws, Marginalization convention, std::uint64_t seed);

struct PriorLimitSetup {
  int clusters = 100;
  int births = 25;
  std::vector<double> beta{-0.5, -0.04, 0.3, -0.25};
  PriorSpec prior{1e3, 1e4, 1e-4};
  McmcConfig mcmc;
  double se_multiple = 2.0;
};

PriorLimitSetup default_prior_limit_setup();

/// Flat-prior fit with sigma2 pinned near zero on sigma2 = 0 data, against
/// the maximum-likelihood probit; each posterior mean must lie within
/// `se_multiple` Monte-Carlo standard errors (sd / sqrt(ESS)).
CheckResult check_prior_limit(const PriorLimitSetup& setup, std::uint64_t seed);

struct ValidateOptions {
  Marginalization convention = Marginalization::appendix_divide;
  std::uint64_t seed = 1;
};

std::vector<CheckResult> run_validation_suite(const ValidateOptions& options);

void print_results(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace elm::cli
