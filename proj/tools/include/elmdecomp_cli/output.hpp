#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace elm::cli {

std::string sha256_hex(const std::filesystem::path& file);

/// Collects a command's files in a staging directory inside the output
/// directory and moves them into place only on commit(). Destroying an
/// uncommitted stage deletes everything written so far.
class StagedOutput {
 public:
  explicit StagedOutput(std::filesystem::path output_dir);
  ~StagedOutput();
  StagedOutput(const StagedOutput&) = delete;
  StagedOutput& operator=(const StagedOutput&) = delete;

  /// Path to write `name` to; the file is recorded for the manifest.
  std::filesystem::path file(const std::string& name);
  void write_text(const std::string& name, const std::string& text);
  void write_json(const std::string& name, const nlohmann::json& j);

  /// Writes run_manifest.json (`header` plus a hash per file), then moves
  /// every staged file into the output directory.
  void commit(nlohmann::json header);

  const std::filesystem::path& output_dir() const { return output_dir_; }

 private:
  std::filesystem::path output_dir_;
  std::filesystem::path staging_;
  std::vector<std::string> names_;
  bool created_output_dir_ = false;
  bool committed_ = false;
};

/// Tool, library and compiler versions recorded in manifests.
nlohmann::json version_info();

}  // namespace elm::cli
