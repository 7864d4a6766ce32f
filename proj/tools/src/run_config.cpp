#include "elmdecomp_cli/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "elmdecomp/config_json.hpp"
#include "elmdecomp/error.hpp"

namespace elm::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys{"csv",    "synthetic",       "survey_years", "schema",
                                          "prior",  "mcmc",            "order",        "marginalization",
                                          "output_dir", "seed",        "poor_quantile"};

[[noreturn]] void bad(const std::string& what) { throw InvalidArgument("config", what); }

}  // namespace

RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir) {
  if (j.is_null() || (j.is_object() && j.empty())) throw EmptyConfig{};
  if (!j.is_object()) bad("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kTopLevelKeys.contains(key)) bad("unknown key '" + key + "'");

  RunConfig c;
  try {
    if (j.contains("schema")) c.schema = schema_from_json(j.at("schema"));
    if (j.contains("prior")) c.prior = prior_from_json(j.at("prior"));
    if (j.contains("mcmc")) {
      json m = j.at("mcmc");
      if (!m.is_object()) bad("mcmc must be an object");
      if (m.contains("auto_extend")) {
        c.auto_extend = m.at("auto_extend").get<bool>();
        m.erase("auto_extend");
      }
      // The run seed drives every stream; a seed inside mcmc is not accepted.
      if (m.contains("seed") || m.contains("chain"))
        bad("set the seed at top level; mcmc.seed and mcmc.chain are derived");
      c.mcmc = mcmc_from_json(m);
    }
    if (j.contains("order")) c.order = j.at("order").get<std::vector<std::string>>();
    if (j.contains("marginalization"))
      c.marginalization = parse_marginalization(j.at("marginalization").get<std::string>());
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("poor_quantile")) c.poor_quantile = j.at("poor_quantile").get<double>();
    if (j.contains("survey_years")) {
      const auto years = j.at("survey_years").get<std::vector<int>>();
      if (years.size() != 2) bad("survey_years needs two entries");
      c.survey_years = {years[0], years[1]};
    }
    if (j.contains("csv")) {
      const auto& in = j.at("csv");
      if (!in.is_object() || !in.contains("s1") || !in.contains("s2") || in.size() != 2)
        bad("csv input needs exactly the keys s1 and s2");
      CsvInput paths{in.at("s1").get<std::string>(), in.at("s2").get<std::string>()};
      if (paths.s1.is_relative() && !base_dir.empty()) paths.s1 = base_dir / paths.s1;
      if (paths.s2.is_relative() && !base_dir.empty()) paths.s2 = base_dir / paths.s2;
      c.csv = paths;
    }
    if (j.contains("synthetic")) {
      json s = j.at("synthetic");
      if (s.is_object() && !s.contains("poor_quantile")) s["poor_quantile"] = c.poor_quantile;
      auto dgp = dgp_from_json(s, c.schema);
      for (int k = 0; k < 2; ++k) {
        auto& year = dgp.surveys[k].survey_year;
        if (year == 0) year = c.survey_years[k];
        else if (c.survey_years[k] == 0) c.survey_years[k] = year;
        else if (year != c.survey_years[k])
          bad("synthetic survey_year disagrees with survey_years");
      }
      c.poor_quantile = dgp.poor_quantile;
      c.synthetic = std::move(dgp);
    }
  } catch (const json::exception& e) {
    bad(std::string("malformed value: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config", "cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw EmptyConfig{};
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config", "config is not valid JSON: " + std::string(e.what()));
  }
  return parse_run_config(j, path.parent_path());
}

void validate(const RunConfig& c) {
  if (c.csv.has_value() == c.synthetic.has_value())
    bad("exactly one input mode (csv or synthetic) must be set");
  if (c.survey_years[0] == 0 || c.survey_years[1] == 0) bad("survey_years must be given");
  if (!(c.survey_years[1] > c.survey_years[0]))
    bad("survey 2 year must be later than survey 1 year");
  if (!(c.poor_quantile > 0.0 && c.poor_quantile <= 1.0)) bad("poor_quantile must lie in (0, 1]");
  if (c.output_dir.empty()) bad("output_dir must not be empty");
  c.prior.validate();
  c.mcmc.validate();
}

json echo(const RunConfig& c) {
  json j;
  if (c.csv) j["csv"] = {{"s1", c.csv->s1.string()}, {"s2", c.csv->s2.string()}};
  if (c.synthetic) j["synthetic"] = to_json(*c.synthetic);
  j["survey_years"] = c.survey_years;
  j["schema"] = to_json(c.schema);
  j["prior"] = to_json(c.prior);
  json m = to_json(c.mcmc);
  m.erase("seed");
  m.erase("chain");
  m["auto_extend"] = c.auto_extend;
  j["mcmc"] = m;
  j["order"] = c.order;
  j["marginalization"] = std::string(to_string(c.marginalization));
  j["seed"] = c.seed;
  j["poor_quantile"] = c.poor_quantile;
  return j;
}

std::vector<std::string> split_order(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace elm::cli
