#pragma once

namespace elm {

/// Standard normal CDF, accurate to a few ulps over the whole real line.
/// Saturates to exactly 0 or 1 far in the tails without overflow.
double norm_cdf(double x);

double norm_pdf(double x);

/// Inverse of norm_cdf for p in (0, 1).
double norm_quantile(double p);

}  // namespace elm
