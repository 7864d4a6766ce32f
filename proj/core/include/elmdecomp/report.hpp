#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "elmdecomp/decompose.hpp"
#include "elmdecomp/oracles.hpp"

namespace elm {

// Display rules of the published tables: rates per 1000 with one decimal,
// percents as integers truncated toward zero.
std::string format_rate(double per_1000);
std::string format_percent(double percent);

std::string mortality_csv(const DecompositionSummary& summary);
std::string overall_decomp_csv(const DecompositionSummary& summary);
std::string coef_decomp_csv(const DecompositionSummary& summary);
std::string variance_profile_csv(const oracle::VarianceCollapseProfile& profile);

nlohmann::json to_json(const DecompositionSummary& summary);
DecompositionSummary summary_from_json(const nlohmann::json& j);

nlohmann::json to_json(const oracle::VarianceCollapseProfile& profile);

/// Writes mortality.csv, overall_decomp.csv and coef_decomp.csv into `dir`.
void write_tables(const std::filesystem::path& dir, const DecompositionSummary& summary);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace elm
