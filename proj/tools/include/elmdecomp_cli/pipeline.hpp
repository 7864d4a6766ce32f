#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "elmdecomp/decompose.hpp"
#include "elmdecomp/mcmc_diagnostics.hpp"
#include "elmdecomp/oracles.hpp"
#include "elmdecomp_cli/output.hpp"
#include "elmdecomp_cli/presets.hpp"
#include "elmdecomp_cli/run_config.hpp"

namespace elm::cli {

// Fits draw from make_stream(seed, kFitStreamBase + survey), clear of the
// streams the simulator uses for the same seed.
inline constexpr std::uint64_t kFitStreamBase = 1000;

/// Ingests or synthesizes both surveys and builds their shared-basis designs.
BuiltDesigns load_data(const RunConfig& config);

struct SurveyFit {
  PosteriorDraws draws;
  FitDiagnostics diagnostics;
  McmcConfig used;
  bool extended = false;
  bool meets_target = false;
};

SurveyFit fit_survey(const DesignMatrix& design, const RunConfig& config, SurveyId id);

/// Both surveys, fitted on two threads.
std::array<SurveyFit, 2> fit_both(const BuiltDesigns& data, const RunConfig& config);

nlohmann::json diagnostics_json(const std::array<SurveyFit, 2>& fits);

struct Decomposition {
  DecompositionResult result;
  oracle::VarianceCollapseProfile profile;
};

Decomposition decompose(const BuiltDesigns& data, const PosteriorDraws& draws1,
                        const PosteriorDraws& draws2, const RunConfig& config);

nlohmann::json decomposition_json(const Decomposition& d, const RunConfig& config);

/// Human-readable tables in the published layout.
std::string text_report(const DecompositionSummary& summary);

// Subcommands. Each writes into config.output_dir through a StagedOutput,
// so a failure leaves no partial files behind.
void run_simulate(const RunConfig& config);
void run_fit(const RunConfig& config);
void run_decompose(const RunConfig& config, const std::filesystem::path& draws_dir);
void run_report(const std::filesystem::path& from_dir, const std::filesystem::path& out_dir,
                std::ostream& text);
void run_all(const RunConfig& config);

}  // namespace elm::cli
