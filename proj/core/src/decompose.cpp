#include "elmdecomp/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "elmdecomp/error.hpp"
#include "elmdecomp/normal.hpp"

namespace elm {

namespace {

double mean_response(const DesignMatrix& design, const Eigen::VectorXd& beta, Link link) {
  if (link == Link::probit) return mean_probability(design, beta);
  return (design.values * beta).mean();
}

void require_compatible(const DesignMatrix& a, const DesignMatrix& b) {
  if (a.cols() != b.cols() || a.column_groups != b.column_groups)
    throw InvalidArgument("decompose", "designs disagree on column groups");
}

struct Span {
  Eigen::Index begin;
  Eigen::Index size;
};

std::vector<Span> resolve_order(const DesignMatrix& design, const std::vector<std::string>& order) {
  std::set<std::string> expected{std::string(kIntercept)};
  for (const auto& g : design.column_groups) expected.insert(g.name);
  const std::set<std::string> given(order.begin(), order.end());
  if (given.size() != order.size() || given != expected)
    throw InvalidArgument("decompose",
                          "decomposition order must be a permutation of the intercept and "
                          "the covariate groups");
  std::vector<Span> spans;
  for (const auto& name : order) {
    if (name == kIntercept) {
      spans.push_back({0, 1});
    } else {
      const auto* g = design.group(name);
      spans.push_back({g->begin, g->size()});
    }
  }
  return spans;
}

}  // namespace

OverallEffects overall_decompose(const DesignMatrix& design1, const DesignMatrix& design2,
                                 const MarginalDraw& beta1, const MarginalDraw& beta2, Link link) {
  require_compatible(design1, design2);
  if (beta1.beta.size() != design1.cols() || beta2.beta.size() != design1.cols())
    throw InvalidArgument("decompose", "coefficient length does not match the design");
  const double own1 = mean_response(design1, beta1.beta, link);
  const double swapped = mean_response(design2, beta1.beta, link);
  const double own2 = mean_response(design2, beta2.beta, link);
  return {own1 - own2, own1 - swapped, swapped - own2};
}

std::vector<GroupEffect> coefficient_decompose(const DesignMatrix& design2,
                                               const MarginalDraw& beta1,
                                               const MarginalDraw& beta2,
                                               const std::vector<std::string>& order, Link link) {
  if (beta1.beta.size() != design2.cols() || beta2.beta.size() != design2.cols())
    throw InvalidArgument("decompose", "coefficient length does not match the design");
  const auto spans = resolve_order(design2, order);

  Eigen::VectorXd hybrid = beta1.beta;
  double previous = mean_response(design2, hybrid, link);
  std::vector<GroupEffect> out;
  out.reserve(order.size());
  for (std::size_t k = 0; k < spans.size(); ++k) {
    hybrid.segment(spans[k].begin, spans[k].size) = beta2.beta.segment(spans[k].begin, spans[k].size);
    const double current = mean_response(design2, hybrid, link);
    out.push_back({order[k], previous - current});
    previous = current;
  }
  return out;
}

std::vector<std::string> default_order(const DesignMatrix& design) {
  static const char* const canonical[] = {"wealth_rank",    "maternal_education", "maternal_age",
                                          "birth_order",    "birth_interval",     "sex",
                                          "residence"};
  std::vector<std::string> order{std::string(kIntercept)};
  for (const char* name : canonical)
    if (design.group(name)) order.emplace_back(name);
  for (const auto& g : design.column_groups)
    if (std::find(order.begin(), order.end(), g.name) == order.end()) order.push_back(g.name);
  return order;
}

DecompositionDraws decompose_draws(const DesignMatrix& design1, const DesignMatrix& design2,
                                   const PosteriorDraws& draws1, const PosteriorDraws& draws2,
                                   const std::vector<std::string>& order,
                                   Marginalization convention) {
  require_compatible(design1, design2);
  if (draws1.size() != draws2.size())
    throw InvalidArgument("decompose", "surveys have different numbers of posterior draws (" +
                                           std::to_string(draws1.size()) + " vs " +
                                           std::to_string(draws2.size()) + ")");
  if (draws1.size() == 0) throw InvalidArgument("decompose", "no posterior draws");
  if (draws1.coefficients() != design1.cols() || draws2.coefficients() != design1.cols())
    throw InvalidArgument("decompose", "draws and design disagree on the number of coefficients");
  resolve_order(design2, order);

  const Eigen::Index n = draws1.size();
  DecompositionDraws out;
  out.order = order;
  out.rate1.resize(n);
  out.rate2.resize(n);
  out.overall_diff.resize(n);
  out.x_effect.resize(n);
  out.beta_effect.resize(n);
  out.group_effects.resize(n, static_cast<Eigen::Index>(order.size()));
  for (Eigen::Index l = 0; l < n; ++l) {
    const auto b1 = marginalize(draws1, l, convention);
    const auto b2 = marginalize(draws2, l, convention);
    const auto overall = overall_decompose(design1, design2, b1, b2);
    out.overall_diff[l] = overall.overall_diff;
    out.x_effect[l] = overall.x_effect;
    out.beta_effect[l] = overall.beta_effect;
    out.rate1[l] = mean_probability(design1, b1.beta);
    out.rate2[l] = mean_probability(design2, b2.beta);
    const auto groups = coefficient_decompose(design2, b1, b2, order);
    for (std::size_t k = 0; k < groups.size(); ++k)
      out.group_effects(l, static_cast<Eigen::Index>(k)) = groups[k].effect;
  }
  return out;
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw InvalidArgument("decompose", "quantile of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

IntervalSummary interval_summary(std::span<const double> values, double scale) {
  IntervalSummary s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = scale * sum / static_cast<double>(values.size());
  s.lower = scale * quantile(values, 0.025);
  s.upper = scale * quantile(values, 0.975);
  return s;
}

double annualize(double total_diff_per_1000, double years_between) {
  if (!(years_between > 0.0)) throw InvalidArgument("decompose", "years_between must be > 0");
  return total_diff_per_1000 / years_between;
}

ComponentSummary summarize_component(std::string name, std::span<const double> values,
                                     std::span<const double> overall, double years_between) {
  if (values.size() != overall.size() || values.empty())
    throw InvalidArgument("decompose", "component and overall draws differ in length");
  const auto iv = interval_summary(values);
  const auto ov = interval_summary(overall);

  ComponentSummary c;
  c.name = std::move(name);
  c.mean = iv.mean;
  c.lower = iv.lower;
  c.upper = iv.upper;
  c.per_year = annualize(1000.0 * iv.mean, years_between);
  c.per_year_lower = annualize(1000.0 * iv.lower, years_between);
  c.per_year_upper = annualize(1000.0 * iv.upper, years_between);
  c.percent = ov.mean != 0.0 ? 100.0 * (iv.mean / ov.mean) : std::numeric_limits<double>::quiet_NaN();

  std::vector<double> ratios;
  ratios.reserve(values.size());
  for (std::size_t l = 0; l < values.size(); ++l)
    if (overall[l] != 0.0) ratios.push_back(100.0 * (values[l] / overall[l]));
  if (!ratios.empty()) {
    c.percent_lower = quantile(ratios, 0.025);
    c.percent_upper = quantile(ratios, 0.975);
  } else {
    c.percent_lower = c.percent_upper = std::numeric_limits<double>::quiet_NaN();
  }
  c.significant = !(c.lower <= 0.0 && 0.0 <= c.upper);
  return c;
}

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

DecompositionSummary summarize(const DecompositionDraws& draws, double years_between) {
  if (!(years_between > 0.0)) throw InvalidArgument("decompose", "years_between must be > 0");
  DecompositionSummary s;
  s.years_between = years_between;
  const auto overall = as_span(draws.overall_diff);

  s.mortality.s1 = interval_summary(as_span(draws.rate1), 1000.0);
  s.mortality.s2 = interval_summary(as_span(draws.rate2), 1000.0);
  s.mortality.diff = interval_summary(overall, 1000.0);
  s.mortality.diff_per_year = interval_summary(overall, 1000.0 / years_between);

  s.overall_diff = summarize_component("overall_diff", overall, overall, years_between);
  s.x_effect = summarize_component("x_effect", as_span(draws.x_effect), overall, years_between);
  s.beta_effect =
      summarize_component("beta_effect", as_span(draws.beta_effect), overall, years_between);
  for (std::size_t k = 0; k < draws.order.size(); ++k) {
    const Eigen::VectorXd col = draws.group_effects.col(static_cast<Eigen::Index>(k));
    s.groups.push_back(summarize_component(draws.order[k], as_span(col), overall, years_between));
  }
  return s;
}

DecompositionResult posterior_decompose(const DesignMatrix& design1, const DesignMatrix& design2,
                                        const PosteriorDraws& draws1, const PosteriorDraws& draws2,
                                        const std::vector<std::string>& order,
                                        double years_between, Marginalization convention) {
  if (!(years_between > 0.0)) throw InvalidArgument("decompose", "years_between must be > 0");
  DecompositionResult r;
  r.draws = decompose_draws(design1, design2, draws1, draws2, order, convention);
  r.summary = summarize(r.draws, years_between);
  return r;
}

}  // namespace elm
