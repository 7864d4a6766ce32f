#pragma once

#include <span>
#include <vector>

namespace elm {

/// Knot layout for one spline-expanded covariate: boundary knots plus the
/// interior knots. The full (clamped) knot vector repeats each boundary knot
/// `degree + 1` times.
struct SplineKnots {
  int degree = 3;
  double lower = 0.0;
  double upper = 1.0;
  std::vector<double> interior;

  int basis_size() const { return static_cast<int>(interior.size()) + degree + 1; }
  std::vector<double> full_knot_vector() const;
};

/// Evaluates every B-spline basis function of the given degree at `x` using
/// the Cox-de Boor recursion. `knots` is the full knot vector (boundary knots
/// repeated); `x` is clamped to [knots.front(), knots.back()]. Returns
/// `knots.size() - degree - 1` non-negative values summing to one.
///
/// Throws InvalidArgument if the knots decrease anywhere, if the boundary
/// interval is empty, or if the vector is too short for the degree.
std::vector<double> bspline_basis(double x, std::span<const double> knots, int degree);

std::vector<double> bspline_basis(double x, const SplineKnots& knots);

/// Boundary knots at the data range and `df - degree` interior knots at
/// equally spaced quantiles. `df` counts the basis columns kept after the
/// first basis function is dropped (it is absorbed by the intercept).
SplineKnots place_knots(std::span<const double> values, int degree, int df);

}  // namespace elm
