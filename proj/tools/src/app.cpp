#include "elmdecomp_cli/app.hpp"

#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "elmdecomp/error.hpp"
#include "elmdecomp_cli/pipeline.hpp"
#include "elmdecomp_cli/run_config.hpp"
#include "elmdecomp_cli/validate.hpp"

namespace elm::cli {

using nlohmann::json;
using fs_path = std::filesystem::path;

json error_record(const Error& e) {
  json r{{"kind", e.kind()}, {"module", e.module()}, {"message", e.what()}};
  if (const auto* s = dynamic_cast<const SchemaError*>(&e); s && !s->column().empty())
    r["column"] = s->column();
  if (const auto* row = dynamic_cast<const RowError*>(&e)) r["line"] = row->line();
  if (const auto* d = dynamic_cast<const DegenerateDesignError*>(&e)) r["column"] = d->column();
  if (const auto* n = dynamic_cast<const NumericalError*>(&e))
    r["smallest_eigenvalue"] = n->smallest_eigenvalue();
  if (const auto* c = dynamic_cast<const NonConvergenceError*>(&e))
    r["last_iterate"] = c->last_iterate();
  return {{"error", r}};
}

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string order;
  std::string marginalization;
};

void add_common(CLI::App* cmd, Overrides& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config, "Run configuration (JSON)");
  if (config_required) c->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Seed; overrides the config");
  cmd->add_option("--out", o.out, "Output directory; overrides the config");
  cmd->add_option("--order", o.order, "Decomposition order, comma separated");
  cmd->add_option("--marginalization", o.marginalization, "appendix_divide or maintext_multiply")
      ->check(CLI::IsMember({"appendix_divide", "maintext_multiply"}));
}

RunConfig resolve(const Overrides& o) {
  if (o.config.empty()) throw EmptyConfig{};
  RunConfig c = load_run_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (!o.out.empty()) c.output_dir = o.out;
  if (!o.order.empty()) c.order = split_order(o.order);
  if (!o.marginalization.empty()) c.marginalization = parse_marginalization(o.marginalization);
  validate(c);
  return c;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian hierarchical probit fits and Oaxaca decomposition of early-life "
               "mortality between two surveys",
               "elmdecomp"};
  Overrides o;
  std::string draws_dir, from_dir;

  auto* simulate = app.add_subcommand("simulate", "Draw two synthetic surveys as CSV");
  auto* fitcmd = app.add_subcommand("fit", "Fit both surveys and write posterior draws");
  auto* decomp = app.add_subcommand("decompose", "Decompose saved posterior draws");
  auto* report = app.add_subcommand("report", "Render tables from decomposition.json");
  auto* check = app.add_subcommand("validate", "Run the oracle checks");
  auto* run = app.add_subcommand("run", "Full pipeline: data, fits, decomposition, tables");
  for (auto* cmd : {simulate, fitcmd, decomp, run}) add_common(cmd, o, true);
  decomp->add_option("--draws", draws_dir, "Directory holding draws_s1.csv and draws_s2.csv");
  report->add_option("--from", from_dir, "Directory holding decomposition.json")->required();
  report->add_option("--out", o.out, "Output directory (default: the --from directory)");
  check->add_option("--config", o.config, "Run configuration (JSON)");
  check->add_option("--seed", o.seed, "Seed");
  check->add_option("--marginalization", o.marginalization, "appendix_divide or maintext_multiply")
      ->check(CLI::IsMember({"appendix_divide", "maintext_multiply"}));
  app.require_subcommand(0, 1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  auto usage = [&](const CLI::App* cmd) {
    err << (cmd ? cmd->help() : app.help());
    return 2;
  };
  if (app.get_subcommands().empty()) return usage(nullptr);
  CLI::App* active = app.get_subcommands().front();

  try {
    if (active == check) {
      ValidateOptions v;
      if (!o.config.empty()) {
        const RunConfig c = load_run_config(o.config);
        v.convention = c.marginalization;
        v.seed = c.seed;
      }
      if (o.seed) v.seed = *o.seed;
      if (!o.marginalization.empty()) v.convention = parse_marginalization(o.marginalization);
      const auto results = run_validation_suite(v);
      print_results(results, out);
      for (const auto& r : results)
        if (!r.passed) return 1;
      return 0;
    }
    if (active == report) {
      run_report(from_dir, o.out.empty() ? from_dir : o.out, out);
      return 0;
    }
    const RunConfig config = resolve(o);
    if (active == simulate) run_simulate(config);
    else if (active == fitcmd) run_fit(config);
    else if (active == decomp) run_decompose(config, draws_dir.empty() ? config.output_dir : fs_path(draws_dir));
    else run_all(config);
    out << "wrote " << config.output_dir.string() << '\n';
    return 0;
  } catch (const EmptyConfig&) {
    return usage(active);
  } catch (const Error& e) {
    err << error_record(e).dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << json{{"error", {{"kind", "internal"}, {"module", "cli"}, {"message", e.what()}}}}.dump()
        << '\n';
    return 1;
  }
}

}  // namespace elm::cli
