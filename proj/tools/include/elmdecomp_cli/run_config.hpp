#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "elmdecomp/dataset.hpp"
#include "elmdecomp/marginal.hpp"
#include "elmdecomp/sampler.hpp"
#include "elmdecomp/synthesize.hpp"

namespace elm::cli {

struct CsvInput {
  std::filesystem::path s1;
  std::filesystem::path s2;
};

/// Everything one invocation needs. Exactly one of `csv` / `synthetic` is set.
struct RunConfig {
  std::optional<CsvInput> csv;
  std::optional<DgpConfig> synthetic;
  std::array<int, 2> survey_years{0, 0};
  CovariateSchema schema = CovariateSchema::default_schema();
  PriorSpec prior;
  McmcConfig mcmc;
  bool auto_extend = true;  // refit once with a doubled chain if the ESS target is missed
  std::vector<std::string> order;  // empty: default order
  Marginalization marginalization = Marginalization::appendix_divide;
  std::filesystem::path output_dir = "elmdecomp_out";
  std::uint64_t seed = 1;
  double poor_quantile = 0.2;

  double years_between() const { return survey_years[1] - survey_years[0]; }
};

/// Raised for a config that is absent or has no content; the CLI answers it
/// with usage text.
struct EmptyConfig {};

/// Parses a config document. Relative csv paths are resolved against
/// `base_dir`. Throws InvalidArgument("config", ...) on unknown keys or bad
/// values, and EmptyConfig for `{}`.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

/// Reads and parses a config file; an empty or whitespace-only file throws
/// EmptyConfig.
RunConfig load_run_config(const std::filesystem::path& path);

/// Cross-field rules: one input mode, increasing survey years, sane quantile.
void validate(const RunConfig& config);

/// Normalised config echo for manifests and sidecars. The output directory
/// is left out so identical runs into different directories match.
nlohmann::json echo(const RunConfig& config);

std::vector<std::string> split_order(const std::string& comma_list);

}  // namespace elm::cli
