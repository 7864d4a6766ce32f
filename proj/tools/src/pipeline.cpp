#include "elmdecomp_cli/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "elmdecomp/config_json.hpp"
#include "elmdecomp/draws_io.hpp"
#include "elmdecomp/error.hpp"
#include "elmdecomp/report.hpp"

namespace elm::cli {

using nlohmann::json;

BuiltDesigns load_data(const RunConfig& config) {
  if (config.synthetic) {
    auto [s1, s2] = synthesize(*config.synthetic, config.seed);
    return build_designs(std::move(s1), std::move(s2), config.schema, config.poor_quantile);
  }
  auto s1 = ingest_csv(config.csv->s1, config.schema, config.survey_years[0], SurveyId::S1);
  auto s2 = ingest_csv(config.csv->s2, config.schema, config.survey_years[1], SurveyId::S2);
  return build_designs(std::move(s1), std::move(s2), config.schema, config.poor_quantile);
}

SurveyFit fit_survey(const DesignMatrix& design, const RunConfig& config, SurveyId id) {
  SurveyFit out;
  out.used = config.mcmc;
  out.used.seed = config.seed;
  out.used.chain = kFitStreamBase + (id == SurveyId::S1 ? 0 : 1);
  const int target = out.used.target_draws;
  const double ess_target = 0.8 * target;

  out.draws = fit(design, config.prior, out.used, id);
  out.diagnostics = diagnose(out.draws);
  out.meets_target = out.diagnostics.meets_independence_target(target, ess_target);
  if (!out.meets_target && config.auto_extend) {
    out.used.iterations *= 2;
    out.used.burn_in *= 2;
    out.extended = true;
    out.draws = fit(design, config.prior, out.used, id);
    out.diagnostics = diagnose(out.draws);
    out.meets_target = out.diagnostics.meets_independence_target(target, ess_target);
  }
  return out;
}

std::array<SurveyFit, 2> fit_both(const BuiltDesigns& data, const RunConfig& config) {
  auto second = std::async(std::launch::async,
                           [&] { return fit_survey(data.d2, config, SurveyId::S2); });
  SurveyFit first;
  try {
    first = fit_survey(data.d1, config, SurveyId::S1);
  } catch (...) {
    second.wait();
    throw;
  }
  return {std::move(first), second.get()};
}

json diagnostics_json(const std::array<SurveyFit, 2>& fits) {
  json j;
  for (const auto& f : fits) {
    json d = to_json(f.diagnostics);
    d["mcmc"] = to_json(f.used);
    d["extended"] = f.extended;
    d["meets_target"] = f.meets_target;
    if (!f.meets_target)
      d["warning"] = "fewer than " + std::to_string(f.used.target_draws) +
                     " approximately independent draws (min ESS " +
                     format_double(f.diagnostics.min_ess) + ")";
    j[std::string(to_string(f.draws.survey_id))] = d;
  }
  return j;
}

Decomposition decompose(const BuiltDesigns& data, const PosteriorDraws& draws1,
                        const PosteriorDraws& draws2, const RunConfig& config) {
  for (const auto* d : {&draws1, &draws2})
    if (d->column_names != data.d1.column_names)
      throw InvalidArgument("cli", "posterior draws for " + std::string(to_string(d->survey_id)) +
                                       " do not match the design columns");
  const auto order = config.order.empty() ? default_order(data.d2) : config.order;
  Decomposition out;
  out.result = posterior_decompose(data.d1, data.d2, draws1, draws2, order, config.years_between(),
                                   config.marginalization);
  out.profile = oracle::variance_collapse(out.result.draws.group_effects,
                                          out.result.draws.beta_effect, order);
  return out;
}

json decomposition_json(const Decomposition& d, const RunConfig& config) {
  return {{"summary", to_json(d.result.summary)},
          {"order", d.result.draws.order},
          {"marginalization", std::string(to_string(config.marginalization))},
          {"survey_years", config.survey_years},
          {"draws", d.result.draws.overall_diff.size()},
          {"variance_profile", to_json(d.profile)}};
}

namespace {

json manifest_header(const std::string& command, const RunConfig& config) {
  return {{"command", command}, {"seed", config.seed}, {"config", echo(config)}};
}

void write_fits(StagedOutput& out, const std::array<SurveyFit, 2>& fits, const RunConfig& config) {
  for (const auto& f : fits) {
    json sidecar = echo(config);
    sidecar["mcmc_used"] = to_json(f.used);
    sidecar["extended"] = f.extended;
    const std::string stem = f.draws.survey_id == SurveyId::S1 ? "draws_s1" : "draws_s2";
    write_draws(out.file(stem + ".csv"), f.draws, sidecar);
    out.file(stem + ".json");
  }
  out.write_json("diagnostics.json", diagnostics_json(fits));
}

void write_decomposition(StagedOutput& out, const Decomposition& d, const RunConfig& config) {
  const auto& s = d.result.summary;
  out.write_text("mortality.csv", mortality_csv(s));
  out.write_text("overall_decomp.csv", overall_decomp_csv(s));
  out.write_text("coef_decomp.csv", coef_decomp_csv(s));
  out.write_text("variance_profile.csv", variance_profile_csv(d.profile));
  out.write_json("decomposition.json", decomposition_json(d, config));
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string text_report(const DecompositionSummary& s) {
  std::ostringstream out;
  const auto& m = s.mortality;
  out << "Mortality per 1000 births (years between surveys: " << format_double(s.years_between)
      << ")\n";
  out << "  S1 " << format_rate(m.s1.mean) << "  S2 " << format_rate(m.s2.mean) << "  Diff "
      << format_rate(m.diff.mean) << "  Diff per year " << format_rate(m.diff_per_year.mean)
      << "\n\n";
  auto rows = [&](const std::vector<const ComponentSummary*>& cs) {
    out << "  " << pad("", 20) << pad("per year", 10) << pad("95% interval", 18) << "%\n";
    for (const auto* c : cs)
      out << (c->significant ? "* " : "  ") << pad(c->name, 20) << pad(format_rate(c->per_year), 10)
          << pad("[" + format_rate(c->per_year_lower) + ", " + format_rate(c->per_year_upper) + "]", 18)
          << format_percent(c->percent) << '\n';
  };
  out << "Overall decomposition\n";
  rows({&s.x_effect, &s.beta_effect, &s.overall_diff});
  out << "\nCoefficient effects\n";
  std::vector<const ComponentSummary*> groups;
  for (const auto& g : s.groups) groups.push_back(&g);
  rows(groups);
  out << "\n* 95% interval excludes zero\n";
  return out.str();
}

void run_simulate(const RunConfig& config) {
  if (!config.synthetic) throw InvalidArgument("cli", "simulate needs a synthetic input config");
  StagedOutput out(config.output_dir);
  auto [s1, s2] = synthesize(*config.synthetic, config.seed);
  write_csv(out.file("survey_s1.csv"), s1);
  write_csv(out.file("survey_s2.csv"), s2);
  out.commit(manifest_header("simulate", config));
}

void run_fit(const RunConfig& config) {
  StagedOutput out(config.output_dir);
  const auto data = load_data(config);
  const auto fits = fit_both(data, config);
  write_fits(out, fits, config);
  out.commit(manifest_header("fit", config));
}

void run_decompose(const RunConfig& config, const std::filesystem::path& draws_dir) {
  const auto draws1 = read_draws(draws_dir / "draws_s1.csv");
  const auto draws2 = read_draws(draws_dir / "draws_s2.csv");
  StagedOutput out(config.output_dir);
  const auto data = load_data(config);
  write_decomposition(out, decompose(data, draws1, draws2, config), config);
  out.commit(manifest_header("decompose", config));
}

void run_report(const std::filesystem::path& from_dir, const std::filesystem::path& out_dir,
                std::ostream& text) {
  const auto source = from_dir / "decomposition.json";
  std::ifstream in(source);
  if (!in) throw Error("io", "cannot open '" + source.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("io", "'" + source.string() + "' is not valid JSON: " + e.what());
  }
  const auto summary = summary_from_json(j.at("summary"));
  StagedOutput out(out_dir);
  out.write_text("mortality.csv", mortality_csv(summary));
  out.write_text("overall_decomp.csv", overall_decomp_csv(summary));
  out.write_text("coef_decomp.csv", coef_decomp_csv(summary));
  const std::string report = text_report(summary);
  out.write_text("report.txt", report);
  out.commit({{"command", "report"}, {"source_sha256", sha256_hex(source)}});
  text << report;
}

void run_all(const RunConfig& config) {
  StagedOutput out(config.output_dir);
  const auto data = load_data(config);
  const auto fits = fit_both(data, config);
  write_fits(out, fits, config);
  write_decomposition(out, decompose(data, fits[0].draws, fits[1].draws, config), config);
  out.commit(manifest_header("run", config));
}

}  // namespace elm::cli
