#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "elmdecomp/sampler.hpp"

namespace elm {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Writes `<stem>.csv` (columns beta_0..beta_{p-1},sigma2, one row per draw)
/// and the `<stem>.json` sidecar carrying column groups and `config_echo`.
void write_draws(const std::filesystem::path& csv_path, const PosteriorDraws& draws,
                 const nlohmann::json& config_echo);

/// Reads a draws CSV and its sidecar (same stem, .json extension).
PosteriorDraws read_draws(const std::filesystem::path& csv_path);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

}  // namespace elm
