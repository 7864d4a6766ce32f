// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "elmdecomp/config_json.hpp"
#include "elmdecomp/decompose.hpp"
#include "elmdecomp/draws_io.hpp"
#include "elmdecomp/error.hpp"
#include "elmdecomp/marginal.hpp"
#include "elmdecomp/mcmc_diagnostics.hpp"
#include "elmdecomp/oracles.hpp"
#include "elmdecomp/report.hpp"
#include "elmdecomp_cli/app.hpp"
#include "elmdecomp_cli/pipeline.hpp"
#include "elmdecomp_cli/presets.hpp"
#include "elmdecomp_cli/run_config.hpp"
#include "elmdecomp_cli/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace elm;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Outcome()> body;
};

const std::vector<double> kBeta1{-0.5, -0.4, 0.3, -0.25};
const std::vector<double> kBeta2{-0.9, -0.3, 0.2, -0.15};
constexpr double kSigma2 = 0.25;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome from_check(const cli::CheckResult& r) { return {r.passed, r.detail}; }

Outcome recovery() {
  const auto dgp = cli::four_column_dgp(kBeta1, kBeta2, kSigma2);
  auto [s1, s2] = synthesize(dgp, 101);
  const auto data = cli::build_designs(std::move(s1), std::move(s2), dgp.schema, dgp.poor_quantile);
  McmcConfig mcmc;  // 30000 iterations, 5000 burn-in, thinned to 1250 draws
  mcmc.seed = 101;
  const auto draws = fit(data.d1, PriorSpec{}, mcmc, SurveyId::S1);
  const auto diag = diagnose(draws);
  double worst = 0.0;
  std::string per;
  for (int c = 0; c < 4; ++c) {
    const double err = draws.beta.col(c).mean() - kBeta1[c];
    worst = std::max(worst, std::abs(err));
    per += (c ? ", " : "") + fmt("%+.3f", err);
  }
  const double s2err = std::abs(draws.sigma2.mean() - kSigma2);
  const bool ok = worst < 0.1 && s2err < 0.15 && draws.size() == 1250 && diag.min_ess >= 1000.0;
  return {ok, "beta errors (" + per + "), |sigma2 err| " + fmt("%.3f", s2err) + ", draws " +
                  std::to_string(draws.size()) + ", min ESS " + fmt("%.0f", diag.min_ess)};
}

Outcome coverage(int replications) {
  const auto dgp = cli::four_column_dgp(kBeta1, kBeta2, kSigma2);
  std::vector<int> covered(4, 0);
  for (int r = 0; r < replications; ++r) {
    const std::uint64_t seed = 5000 + static_cast<std::uint64_t>(r);
    auto [s1, s2] = synthesize(dgp, seed);
    const auto data = cli::build_designs(std::move(s1), std::move(s2), dgp.schema, dgp.poor_quantile);
    McmcConfig mcmc;
    mcmc.seed = seed;
    const auto draws = fit(data.d1, PriorSpec{}, mcmc, SurveyId::S1);
    for (int c = 0; c < 4; ++c) {
      const Eigen::VectorXd col = draws.beta.col(c);
      const std::span<const double> v(col.data(), static_cast<std::size_t>(col.size()));
      if (quantile(v, 0.025) <= kBeta1[c] && kBeta1[c] <= quantile(v, 0.975)) ++covered[c];
    }
  }
  int total = 0;
  std::string per;
  for (int c = 0; c < 4; ++c) {
    total += covered[c];
    per += (c ? ", " : "") + std::to_string(covered[c]) + "/" + std::to_string(replications);
  }
  const double rate = 100.0 * total / (4.0 * replications);
  return {rate >= 85.0 && rate <= 99.0,
          std::to_string(replications) + " replications; pooled coverage " + fmt("%.1f", rate) +
              "% (" + std::to_string(total) + "/" + std::to_string(4 * replications) +
              "); per component " + per};
}

Outcome prior_limit() {
  auto setup = cli::default_prior_limit_setup();
  setup.clusters = 200;
  setup.births = 25;
  return from_check(cli::check_prior_limit(setup, 2026));
}

json e2e_config() {
  const auto dgp = cli::four_column_dgp(kBeta1, kBeta2, kSigma2);
  json j;
  j["synthetic"] = to_json(dgp);
  j["schema"] = to_json(dgp.schema);
  j["survey_years"] = {2000, 2014};
  j["seed"] = 777;
  return j;
}

struct E2eState {
  fs::path first;
  cli::RunConfig config;
  bool ran = false;
};

Outcome determinism(const fs::path& workdir, E2eState& state) {
  fs::remove_all(workdir / "e2e");
  fs::create_directories(workdir / "e2e");
  const auto cfg = workdir / "e2e" / "config.json";
  std::ofstream(cfg) << e2e_config().dump(2);
  std::ostringstream out, err;
  for (const char* run : {"run_a", "run_b"}) {
    const int status = cli::run_cli({"run", "--config", cfg.string(), "--out", (workdir / "e2e" / run).string()},
                                    out, err);
    if (status != 0) return {false, std::string(run) + " exited " + std::to_string(status) + ": " + err.str()};
  }
  state.first = workdir / "e2e" / "run_a";
  state.config = cli::load_run_config(cfg);
  state.ran = true;
  int files = 0;
  std::vector<std::string> differing;
  for (const auto& e : fs::directory_iterator(workdir / "e2e" / "run_a")) {
    ++files;
    const auto name = e.path().filename();
    const auto other = workdir / "e2e" / "run_b" / name;
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) differing.push_back(name.string());
  }
  int files_b = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(workdir / "e2e" / "run_b")) ++files_b;
  std::string detail = std::to_string(files) + " files compared";
  if (files != files_b) detail += ", file counts differ";
  for (const auto& d : differing) detail += ", differs: " + d;
  return {differing.empty() && files == files_b && files >= 11, detail};
}

// Sequential group effects for any order follow from the mean survey-2 rate
// under each subset of groups switched to survey-2 coefficients, so the rates
// are computed once per subset and reused across permutations.
Eigen::MatrixXd subset_rates(const DesignMatrix& d2, const PosteriorDraws& draws1,
                             const PosteriorDraws& draws2, const std::vector<ColumnGroup>& groups,
                             Marginalization convention) {
  const int subsets = 1 << groups.size();
  Eigen::MatrixXd rates(draws1.size(), subsets);
  for (Eigen::Index l = 0; l < draws1.size(); ++l) {
    const Eigen::VectorXd b1 = marginalize(draws1, l, convention).beta;
    const Eigen::VectorXd b2 = marginalize(draws2, l, convention).beta;
    for (int mask = 0; mask < subsets; ++mask) {
      Eigen::VectorXd b = b1;
      for (std::size_t g = 0; g < groups.size(); ++g)
        if (mask & (1 << g))
          b.segment(groups[g].begin, groups[g].size()) = b2.segment(groups[g].begin, groups[g].size());
      rates(l, mask) = mean_probability(d2, b);
    }
  }
  return rates;
}

Outcome variance_endpoint(E2eState& state, double& seconds_out) {
  if (!state.ran) return {false, "no fitted run available"};
  const auto draws1 = read_draws(state.first / "draws_s1.csv");
  const auto draws2 = read_draws(state.first / "draws_s2.csv");
  const auto data = cli::load_data(state.config);
  const auto convention = state.config.marginalization;
  const auto t = Clock::now();
  auto order = default_order(data.d2);
  const auto dec = decompose_draws(data.d1, data.d2, draws1, draws2, order, convention);
  const Eigen::VectorXd& beta = dec.beta_effect;
  const double var_beta = (beta.array() - beta.mean()).square().sum() / static_cast<double>(beta.size() - 1);

  std::vector<ColumnGroup> groups;
  for (const auto& name : order)
    groups.push_back(name == kIntercept ? ColumnGroup{name, 0, 1} : *data.d2.group(name));
  const Eigen::MatrixXd rates = subset_rates(data.d2, draws1, draws2, groups, convention);
  const int full = (1 << groups.size()) - 1;
  const double telescope = (rates.col(0) - rates.col(full) - beta).cwiseAbs().maxCoeff();

  std::vector<int> perm(groups.size());
  std::iota(perm.begin(), perm.end(), 0);
  int permutations = 0;
  double worst = 0.0;
  do {
    Eigen::MatrixXd effects(rates.rows(), static_cast<Eigen::Index>(perm.size()));
    std::vector<std::string> names;
    int mask = 0;
    for (std::size_t k = 0; k < perm.size(); ++k) {
      const int next = mask | (1 << perm[k]);
      effects.col(static_cast<Eigen::Index>(k)) = rates.col(mask) - rates.col(next);
      names.push_back(order[static_cast<std::size_t>(perm[k])]);
      mask = next;
    }
    const auto prof = oracle::variance_collapse(effects, beta, names);
    worst = std::max({worst, std::abs(prof.final_variance - var_beta),
                      std::abs(prof.final_variance - prof.beta_effect_variance)});
    ++permutations;
  } while (std::next_permutation(perm.begin(), perm.end()));

  // One direct pass through the production oracle on a non-default order.
  std::vector<std::string> reversed(order.rbegin(), order.rend());
  const auto direct = oracle::variance_collapse(data.d2, draws1, draws2, reversed, convention);
  worst = std::max(worst, std::abs(direct.final_variance - var_beta));
  seconds_out = since(t);
  return {worst < 1e-12 && telescope < 1e-12,
          std::to_string(permutations) + " orders, beta-effect variance " + fmt("%.4g", var_beta) +
              ", max |final - beta variance| " + fmt("%.3g", worst) +
              ", max |subset telescope - beta effect| " + fmt("%.3g", telescope)};
}

Outcome display_arithmetic() {
  auto constant = [](double v) { return Eigen::VectorXd::Constant(20, v); };
  DecompositionDraws fourteen;
  fourteen.order = {"intercept"};
  fourteen.rate1 = constant(0.120);
  fourteen.rate2 = constant(0.045);
  fourteen.overall_diff = constant(0.075);
  fourteen.x_effect = constant(0.014);
  fourteen.beta_effect = constant(0.0616);
  fourteen.group_effects = Eigen::MatrixXd::Constant(20, 1, 0.0616);
  const auto table = overall_decomp_csv(summarize(fourteen, 14.0));
  const auto mort = mortality_csv(summarize(fourteen, 14.0));

  DecompositionDraws sixteen = fourteen;
  sixteen.rate1 = constant(0.130);
  sixteen.rate2 = constant(0.053);
  sixteen.overall_diff = constant(0.077);
  const auto sixteen_mort = mortality_csv(summarize(sixteen, 16.0));

  auto field = [](const std::string& csv, const std::string& row, int index) {
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind(row + ",", 0) != 0 && !(row.empty() && std::isdigit(static_cast<unsigned char>(line[0]))))
        continue;
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      return cells.at(static_cast<std::size_t>(index));
    }
    return std::string("<missing>");
  };
  const std::string x = field(table, "x_effect", 1), xp = field(table, "x_effect", 4);
  const std::string b = field(table, "beta_effect", 1), bp = field(table, "beta_effect", 4);
  const std::string per_year = field(mort, "", 10), sixteen_per_year = field(sixteen_mort, "", 10);
  const bool ok = x == "1.0" && b == "4.4" && xp == "18" && bp == "82" && per_year == "5.4" &&
                  sixteen_per_year == "4.8";
  return {ok, "effects " + x + "/" + b + ", percents " + xp + "/" + bp + ", diff per year " + per_year +
                  " (75 over 14), " + sixteen_per_year + " (77 over 16)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elmdecomp acceptance criteria"};
  std::string workdir = "acceptance_work";
  int replications = 50;
  bool smoke = false;
  std::vector<std::string> only;
  app.add_option("--workdir", workdir, "Scratch directory for pipeline runs");
  app.add_option("--coverage-replications", replications, "Replications for the coverage criterion");
  app.add_flag("--smoke", smoke, "10-replication coverage variant");
  app.add_option("--only", only, "Run only the named criteria");
  CLI11_PARSE(app, argc, argv);
  if (smoke) replications = 10;
  fs::create_directories(workdir);

  E2eState e2e;
  double vc_seconds = 0.0;
  const std::vector<Criterion> criteria{
      {"additivity_identities", 10.0, [] { return from_check(cli::check_additivity(1000, 11)); }},
      {"linear_oracle_equivalence", 1.0, [] { return from_check(cli::check_linear_triangle(100, 12)); }},
      {"marginalization_oracle", 30.0,
       [] { return from_check(cli::check_mc_grid(1000000, Marginalization::appendix_divide, 13)); }},
      {"sampler_recovery", 180.0, recovery},
      {"frequentist_coverage", smoke ? 1800.0 : 9000.0, [&] { return coverage(replications); }},
      {"prior_limit", 120.0, prior_limit},
      {"end_to_end_determinism", 300.0, [&] { return determinism(workdir, e2e); }},
      {"variance_collapse_endpoint", 10.0, [&] { return variance_endpoint(e2e, vc_seconds); }},
      {"display_arithmetic", 1.0, display_arithmetic},
  };

  auto selected = [&](const std::string& name) {
    return only.empty() || std::find(only.begin(), only.end(), name) != only.end();
  };
  int failures = 0;
  for (const auto& c : criteria) {
    // The variance-collapse criterion reads the fitted end-to-end run.
    const bool feeds_next = c.name == "end_to_end_determinism" && selected("variance_collapse_endpoint");
    if (!selected(c.name) && !feeds_next) continue;
    const auto t = Clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    double secs = since(t);
    if (c.name == "variance_collapse_endpoint" && o.passed) secs = vc_seconds;
    if (!selected(c.name)) continue;
    const bool in_time = secs <= c.budget_seconds;
    const bool passed = o.passed && in_time;
    if (!passed) ++failures;
    std::cout << (passed ? "PASS " : "FAIL ") << c.name << " [" << fmt("%.2f", secs) << "s / budget "
              << fmt("%.0f", c.budget_seconds) << "s" << (in_time ? "" : ", over budget") << "] "
              << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
