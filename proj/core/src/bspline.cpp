#include "elmdecomp/bspline.hpp"

#include <algorithm>
#include <cmath>

#include "elmdecomp/error.hpp"

namespace elm {

std::vector<double> SplineKnots::full_knot_vector() const {
  std::vector<double> t;
  t.reserve(interior.size() + 2 * (degree + 1));
  t.insert(t.end(), degree + 1, lower);
  t.insert(t.end(), interior.begin(), interior.end());
  t.insert(t.end(), degree + 1, upper);
  return t;
}

std::vector<double> bspline_basis(double x, std::span<const double> t, int degree) {
  if (degree < 0) throw InvalidArgument("bspline", "spline degree must be >= 0");
  const int m = static_cast<int>(t.size());
  const int n = m - degree - 1;  // number of basis functions
  if (n < 1) throw InvalidArgument("bspline", "knot vector too short for spline degree");
  for (int i = 1; i < m; ++i)
    if (t[i] < t[i - 1]) throw InvalidArgument("bspline", "knots must be ascending");
  const double lo = t[degree];
  const double hi = t[n];
  if (!(hi > lo)) throw InvalidArgument("bspline", "boundary knot interval is empty");

  x = std::clamp(x, lo, hi);

  // Span index k with t[k] <= x < t[k+1]; the right boundary belongs to the
  // last non-empty span.
  int k;
  if (x >= hi) {
    k = n - 1;
    while (k > degree && !(t[k] < t[k + 1])) --k;
  } else {
    k = static_cast<int>(std::upper_bound(t.begin() + degree, t.begin() + n + 1, x) - t.begin()) -
        1;
  }

  // Triangular Cox-de Boor table for the degree+1 non-zero functions on span k.
  std::vector<double> local(degree + 1, 0.0), left(degree + 1), right(degree + 1);
  local[0] = 1.0;
  for (int j = 1; j <= degree; ++j) {
    left[j] = x - t[k + 1 - j];
    right[j] = t[k + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[r + 1] + left[j - r];
      const double temp = denom > 0.0 ? local[r] / denom : 0.0;
      local[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    local[j] = saved;
  }

  std::vector<double> out(n, 0.0);
  for (int r = 0; r <= degree; ++r) {
    const int idx = k - degree + r;
    if (idx >= 0 && idx < n) out[idx] = local[r];
  }
  return out;
}

std::vector<double> bspline_basis(double x, const SplineKnots& knots) {
  const auto t = knots.full_knot_vector();
  return bspline_basis(x, t, knots.degree);
}

namespace {

double type7_quantile(const std::vector<double>& sorted, double q) {
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

SplineKnots place_knots(std::span<const double> values, int degree, int df) {
  if (degree < 0) throw InvalidArgument("bspline", "spline degree must be >= 0");
  if (df < 1 || df < degree)
    throw InvalidArgument("bspline", "spline df must be >= max(1, degree)");
  if (values.empty()) throw InvalidArgument("bspline", "cannot place knots without data");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  SplineKnots knots;
  knots.degree = degree;
  knots.lower = sorted.front();
  knots.upper = sorted.back();
  if (!(knots.upper > knots.lower))
    throw InvalidArgument("bspline", "covariate has no spread; cannot place spline knots");
  const int n_interior = df - degree;
  for (int i = 1; i <= n_interior; ++i)
    knots.interior.push_back(type7_quantile(sorted, static_cast<double>(i) / (n_interior + 1)));
  return knots;
}

}  // namespace elm
