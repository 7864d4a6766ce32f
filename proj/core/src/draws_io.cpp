#include "elmdecomp/draws_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "elmdecomp/error.hpp"

namespace elm {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("io", "cannot format number");
  return std::string(buf, ptr);
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

void write_draws(const std::filesystem::path& csv_path, const PosteriorDraws& draws,
                 const nlohmann::json& config_echo) {
  std::ostringstream csv;
  for (Eigen::Index k = 0; k < draws.coefficients(); ++k) csv << "beta_" << k << ',';
  csv << "sigma2\n";
  for (Eigen::Index l = 0; l < draws.size(); ++l) {
    for (Eigen::Index k = 0; k < draws.coefficients(); ++k)
      csv << format_double(draws.beta(l, k)) << ',';
    csv << format_double(draws.sigma2[l]) << '\n';
  }
  {
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw Error("io", "cannot write '" + csv_path.string() + "'");
    f << csv.str();
  }

  nlohmann::json side;
  side["survey_id"] = std::string(to_string(draws.survey_id));
  side["draws"] = draws.size();
  side["coefficients"] = draws.coefficients();
  side["column_names"] = draws.column_names;
  auto groups = nlohmann::json::array();
  for (const auto& g : draws.column_groups)
    groups.push_back({{"name", g.name}, {"begin", g.begin}, {"end", g.end}});
  side["column_groups"] = groups;
  side["config"] = config_echo;
  std::ofstream f(sidecar_path(csv_path), std::ios::binary);
  if (!f) throw Error("io", "cannot write '" + sidecar_path(csv_path).string() + "'");
  f << side.dump(2) << '\n';
}

PosteriorDraws read_draws(const std::filesystem::path& csv_path) {
  std::ifstream sf(sidecar_path(csv_path));
  if (!sf) throw Error("io", "cannot open draws sidecar '" + sidecar_path(csv_path).string() + "'");
  nlohmann::json side;
  try {
    sf >> side;
  } catch (const nlohmann::json::exception& e) {
    throw Error("io", "malformed draws sidecar: " + std::string(e.what()));
  }

  PosteriorDraws d;
  const auto id = side.at("survey_id").get<std::string>();
  d.survey_id = id == "S2" ? SurveyId::S2 : SurveyId::S1;
  d.column_names = side.at("column_names").get<std::vector<std::string>>();
  for (const auto& g : side.at("column_groups"))
    d.column_groups.push_back({g.at("name").get<std::string>(), g.at("begin").get<int>(),
                               g.at("end").get<int>()});
  const auto p = side.at("coefficients").get<Eigen::Index>();
  const auto n = side.at("draws").get<Eigen::Index>();

  std::ifstream in(csv_path);
  if (!in) throw Error("io", "cannot open draws file '" + csv_path.string() + "'");
  std::string line;
  std::getline(in, line);  // header
  d.beta.resize(n, p);
  d.sigma2.resize(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    if (!std::getline(in, line))
      throw Error("io", "draws file has fewer rows than its sidecar declares");
    const char* cur = line.data();
    const char* end = line.data() + line.size();
    for (Eigen::Index k = 0; k <= p; ++k) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cur, end, v);
      if (ec != std::errc())
        throw Error("io", "unparseable value in draws row " + std::to_string(l + 1));
      if (k < p) d.beta(l, k) = v;
      else d.sigma2[l] = v;
      cur = ptr;
      if (cur < end && *cur == ',') ++cur;
    }
  }
  return d;
}

}  // namespace elm
