#include "elmdecomp/marginal.hpp"

#include <cmath>

#include "elmdecomp/decompose.hpp"
#include "elmdecomp/error.hpp"
#include "elmdecomp/normal.hpp"

namespace elm {

std::string_view to_string(Marginalization m) {
  return m == Marginalization::appendix_divide ? "appendix_divide" : "maintext_multiply";
}

Marginalization parse_marginalization(std::string_view s) {
  if (s == "appendix_divide") return Marginalization::appendix_divide;
  if (s == "maintext_multiply") return Marginalization::maintext_multiply;
  throw InvalidArgument("marginal", "unknown marginalization '" + std::string(s) +
                                        "' (expected appendix_divide or maintext_multiply)");
}

MarginalDraw marginalize(const Eigen::VectorXd& beta, double sigma2, Marginalization convention) {
  if (!(sigma2 >= 0.0)) throw InvalidArgument("marginal", "sigma2 must be >= 0");
  const double factor = std::sqrt(1.0 + sigma2);
  MarginalDraw d;
  d.beta = convention == Marginalization::appendix_divide ? Eigen::VectorXd(beta / factor)
                                                          : Eigen::VectorXd(beta * factor);
  return d;
}

MarginalDraw marginalize(const PosteriorDraws& draws, Eigen::Index index,
                         Marginalization convention) {
  auto d = marginalize(Eigen::VectorXd(draws.beta.row(index).transpose()), draws.sigma2[index],
                       convention);
  d.source = index;
  return d;
}

double marginal_prob(const Eigen::Ref<const Eigen::VectorXd>& x, const MarginalDraw& draw) {
  if (x.size() != draw.beta.size())
    throw InvalidArgument("marginal", "design row and coefficient lengths differ");
  return norm_cdf(x.dot(draw.beta));
}

double mean_probability(const DesignMatrix& design, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = design.values * beta;
  double s = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) s += norm_cdf(eta[i]);
  return s / static_cast<double>(eta.size());
}

MortalityRate mean_mortality(const DesignMatrix& design, const PosteriorDraws& draws,
                             Marginalization convention) {
  if (design.cols() != draws.coefficients())
    throw InvalidArgument("marginal", "design has " + std::to_string(design.cols()) +
                                          " columns but draws have " +
                                          std::to_string(draws.coefficients()) + " coefficients");
  if (draws.size() == 0) throw InvalidArgument("marginal", "no posterior draws");
  MortalityRate out;
  out.per_draw.resize(draws.size());
  for (Eigen::Index l = 0; l < draws.size(); ++l)
    out.per_draw[l] = mean_probability(design, marginalize(draws, l, convention).beta);
  out.per_1000 = interval_summary(
      std::span<const double>(out.per_draw.data(), static_cast<std::size_t>(out.per_draw.size())),
      1000.0);
  return out;
}

}  // namespace elm
