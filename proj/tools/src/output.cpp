#include "elmdecomp_cli/output.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include "elmdecomp/error.hpp"

namespace elm::cli {

namespace fs = std::filesystem;

std::string sha256_hex(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("io", "cannot read '" + file.string() + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw Error("io", "SHA-256 unavailable");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::string hex;
  char two[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(two, sizeof two, "%02x", digest[i]);
    hex += two;
  }
  return hex;
}

StagedOutput::StagedOutput(fs::path output_dir) : output_dir_(std::move(output_dir)) {
  std::error_code ec;
  if (!fs::exists(output_dir_)) {
    fs::create_directories(output_dir_, ec);
    if (ec) throw Error("io", "cannot create output directory '" + output_dir_.string() + "': " + ec.message());
    created_output_dir_ = true;
  }
  staging_ = output_dir_ / ".staging";
  fs::remove_all(staging_, ec);
  fs::create_directories(staging_, ec);
  if (ec) throw Error("io", "output directory '" + output_dir_.string() + "' is not writable: " + ec.message());
}

StagedOutput::~StagedOutput() {
  if (committed_) return;
  std::error_code ec;
  fs::remove_all(staging_, ec);
  if (created_output_dir_ && fs::is_empty(output_dir_, ec)) fs::remove(output_dir_, ec);
}

fs::path StagedOutput::file(const std::string& name) {
  if (std::find(names_.begin(), names_.end(), name) == names_.end()) names_.push_back(name);
  return staging_ / name;
}

void StagedOutput::write_text(const std::string& name, const std::string& text) {
  std::ofstream out(file(name), std::ios::binary);
  if (!out) throw Error("io", "cannot write '" + name + "'");
  out << text;
  if (!out) throw Error("io", "write to '" + name + "' failed");
}

void StagedOutput::write_json(const std::string& name, const nlohmann::json& j) {
  write_text(name, j.dump(2) + "\n");
}

void StagedOutput::commit(nlohmann::json header) {
  std::vector<std::string> names = names_;
  std::sort(names.begin(), names.end());
  auto files = nlohmann::json::array();
  for (const auto& n : names)
    files.push_back({{"name", n},
                     {"bytes", fs::file_size(staging_ / n)},
                     {"sha256", sha256_hex(staging_ / n)}});
  header["files"] = files;
  header["versions"] = version_info();
  {
    std::ofstream out(staging_ / "run_manifest.json", std::ios::binary);
    out << header.dump(2) << '\n';
    if (!out) throw Error("io", "cannot write run_manifest.json");
  }
  names.push_back("run_manifest.json");
  for (const auto& n : names) {
    std::error_code ec;
    fs::rename(staging_ / n, output_dir_ / n, ec);
    if (ec) throw Error("io", "cannot move '" + n + "' into place: " + ec.message());
  }
  committed_ = true;
  std::error_code ec;
  fs::remove_all(staging_, ec);
}

nlohmann::json version_info() {
  return {{"elmdecomp", ELMDECOMP_VERSION},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"boost", BOOST_LIB_VERSION},
          {"openssl", OPENSSL_VERSION_TEXT},
          {"compiler", __VERSION__},
          {"rng", "mt19937_64"}};
}

}  // namespace elm::cli
