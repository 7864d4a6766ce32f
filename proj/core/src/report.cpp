#include "elmdecomp/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "elmdecomp/draws_io.hpp"
#include "elmdecomp/error.hpp"

namespace elm {

std::string format_rate(double per_1000) {
  if (!std::isfinite(per_1000)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", per_1000);
  std::string s(buf);
  if (s == "-0.0") s = "0.0";
  return s;
}

std::string format_percent(double percent) {
  if (!std::isfinite(percent)) return "NA";
  const double t = std::trunc(percent);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.0f", t == 0.0 ? 0.0 : t);
  return buf;
}

namespace {

const char* flag(bool b) { return b ? "true" : "false"; }

void component_row(std::ostringstream& out, const ComponentSummary& c, const std::string& label) {
  out << label << ',' << format_rate(c.per_year) << ',' << format_rate(c.per_year_lower) << ','
      << format_rate(c.per_year_upper) << ',' << format_percent(c.percent) << ','
      << format_percent(c.percent_lower) << ',' << format_percent(c.percent_upper) << ','
      << flag(c.significant) << '\n';
}

constexpr const char* kComponentHeader =
    "effect,effect_lower,effect_upper,percent,percent_lower,percent_upper,significant\n";

}  // namespace

std::string mortality_csv(const DecompositionSummary& s) {
  std::ostringstream out;
  out << "years_between,s1,s1_lower,s1_upper,s2,s2_lower,s2_upper,diff,diff_lower,diff_upper,"
         "diff_per_year,diff_per_year_lower,diff_per_year_upper,significant\n";
  const auto& m = s.mortality;
  out << format_double(s.years_between);
  for (const auto* iv : {&m.s1, &m.s2, &m.diff, &m.diff_per_year})
    out << ',' << format_rate(iv->mean) << ',' << format_rate(iv->lower) << ','
        << format_rate(iv->upper);
  out << ',' << flag(!(m.diff.lower <= 0.0 && 0.0 <= m.diff.upper)) << '\n';
  return out.str();
}

std::string overall_decomp_csv(const DecompositionSummary& s) {
  std::ostringstream out;
  out << "component," << kComponentHeader;
  component_row(out, s.x_effect, "x_effect");
  component_row(out, s.beta_effect, "beta_effect");
  component_row(out, s.overall_diff, "overall_diff");
  return out.str();
}

std::string coef_decomp_csv(const DecompositionSummary& s) {
  std::ostringstream out;
  out << "group," << kComponentHeader;
  component_row(out, s.beta_effect, "overall");
  for (const auto& g : s.groups) component_row(out, g, g.name);
  return out.str();
}

std::string variance_profile_csv(const oracle::VarianceCollapseProfile& p) {
  std::ostringstream out;
  out << "m,group_added,partial_sum_variance\n";
  for (const auto& e : p.entries)
    out << e.terms << ',' << e.group_added << ',' << format_double(e.partial_sum_variance) << '\n';
  return out.str();
}

namespace {

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double number_from(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

nlohmann::json to_json(const IntervalSummary& s) {
  return {{"mean", number(s.mean)}, {"lower", number(s.lower)}, {"upper", number(s.upper)}};
}

IntervalSummary interval_from(const nlohmann::json& j) {
  return {number_from(j.at("mean")), number_from(j.at("lower")), number_from(j.at("upper"))};
}

nlohmann::json to_json(const ComponentSummary& c) {
  return {{"name", c.name},
          {"mean", number(c.mean)},
          {"lower", number(c.lower)},
          {"upper", number(c.upper)},
          {"per_year", number(c.per_year)},
          {"per_year_lower", number(c.per_year_lower)},
          {"per_year_upper", number(c.per_year_upper)},
          {"percent", number(c.percent)},
          {"percent_lower", number(c.percent_lower)},
          {"percent_upper", number(c.percent_upper)},
          {"significant", c.significant}};
}

ComponentSummary component_from(const nlohmann::json& j) {
  ComponentSummary c;
  c.name = j.at("name").get<std::string>();
  c.mean = number_from(j.at("mean"));
  c.lower = number_from(j.at("lower"));
  c.upper = number_from(j.at("upper"));
  c.per_year = number_from(j.at("per_year"));
  c.per_year_lower = number_from(j.at("per_year_lower"));
  c.per_year_upper = number_from(j.at("per_year_upper"));
  c.percent = number_from(j.at("percent"));
  c.percent_lower = number_from(j.at("percent_lower"));
  c.percent_upper = number_from(j.at("percent_upper"));
  c.significant = j.at("significant").get<bool>();
  return c;
}

}  // namespace

nlohmann::json to_json(const DecompositionSummary& s) {
  nlohmann::json j;
  j["years_between"] = s.years_between;
  j["mortality_per_1000"] = {{"s1", to_json(s.mortality.s1)},
                             {"s2", to_json(s.mortality.s2)},
                             {"diff", to_json(s.mortality.diff)},
                             {"diff_per_year", to_json(s.mortality.diff_per_year)}};
  j["overall_diff"] = to_json(s.overall_diff);
  j["x_effect"] = to_json(s.x_effect);
  j["beta_effect"] = to_json(s.beta_effect);
  auto groups = nlohmann::json::array();
  for (const auto& g : s.groups) groups.push_back(to_json(g));
  j["groups"] = groups;
  return j;
}

DecompositionSummary summary_from_json(const nlohmann::json& j) {
  try {
    DecompositionSummary s;
    s.years_between = j.at("years_between").get<double>();
    const auto& m = j.at("mortality_per_1000");
    s.mortality = {interval_from(m.at("s1")), interval_from(m.at("s2")),
                   interval_from(m.at("diff")), interval_from(m.at("diff_per_year"))};
    s.overall_diff = component_from(j.at("overall_diff"));
    s.x_effect = component_from(j.at("x_effect"));
    s.beta_effect = component_from(j.at("beta_effect"));
    for (const auto& g : j.at("groups")) s.groups.push_back(component_from(g));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error("report", "malformed decomposition document: " + std::string(e.what()));
  }
}

nlohmann::json to_json(const oracle::VarianceCollapseProfile& p) {
  nlohmann::json j;
  auto entries = nlohmann::json::array();
  for (const auto& e : p.entries)
    entries.push_back({{"m", e.terms},
                       {"group_added", e.group_added},
                       {"partial_sum_variance", number(e.partial_sum_variance)}});
  j["profile"] = entries;
  j["final_variance"] = number(p.final_variance);
  j["beta_effect_variance"] = number(p.beta_effect_variance);
  j["order"] = p.order;
  auto corr = nlohmann::json::array();
  for (Eigen::Index a = 0; a < p.correlation.rows(); ++a) {
    auto row = nlohmann::json::array();
    for (Eigen::Index b = 0; b < p.correlation.cols(); ++b) row.push_back(number(p.correlation(a, b)));
    corr.push_back(row);
  }
  j["correlation"] = corr;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("report", "cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw Error("report", "write failed for '" + path.string() + "'");
}

void write_tables(const std::filesystem::path& dir, const DecompositionSummary& summary) {
  write_text(dir / "mortality.csv", mortality_csv(summary));
  write_text(dir / "overall_decomp.csv", overall_decomp_csv(summary));
  write_text(dir / "coef_decomp.csv", coef_decomp_csv(summary));
}

}  // namespace elm
