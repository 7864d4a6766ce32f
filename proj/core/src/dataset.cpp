#include "elmdecomp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "elmdecomp/draws_io.hpp"
#include "elmdecomp/error.hpp"

namespace elm {

namespace {

constexpr std::string_view kContinuous[] = {"maternal_age", "maternal_education", "birth_order",
                                            "birth_interval", "wealth_rank"};
constexpr std::string_view kBinary[] = {"sex", "residence"};
constexpr std::string_view kCsvColumns[] = {
    "outcome", "maternal_age", "maternal_education", "birth_order", "birth_interval",
    "sex",     "residence",    "wealth_rank",        "cluster_id"};

constexpr double kMinMaternalAge = 15.0;
constexpr double kMaxMaternalAge = 45.0;

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view cell, std::size_t line, std::string_view column) {
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end || cell.empty())
    throw RowError(line, "cannot parse '" + std::string(cell) + "' in column '" +
                             std::string(column) + "'");
  return v;
}

}  // namespace

std::string_view to_string(SurveyId id) { return id == SurveyId::S1 ? "S1" : "S2"; }
std::string_view to_string(Sex s) { return s == Sex::female ? "female" : "male"; }
std::string_view to_string(Residence r) { return r == Residence::rural ? "rural" : "urban"; }

void SurveySample::add(BirthRecord record) {
  record.survey_id = survey_id_;
  auto it = index_.find(record.cluster_id);
  if (it == index_.end()) {
    index_.emplace(record.cluster_id, clusters_.size());
    clusters_.push_back(Cluster{record.cluster_id, {}});
    it = index_.find(record.cluster_id);
  }
  clusters_[it->second].births.push_back(std::move(record));
  ++births_;
}

SurveySample pool(const SurveySample& a, const SurveySample& b) {
  SurveySample pooled(SurveyId::S1, a.survey_year());
  for (const auto* s : {&a, &b}) {
    const std::string prefix = std::string(to_string(s->survey_id())) + ":";
    s->for_each_birth([&](const BirthRecord& r) {
      BirthRecord copy = r;
      copy.cluster_id = prefix + r.cluster_id;
      pooled.add(std::move(copy));
    });
  }
  return pooled;
}

CovariateSchema::CovariateSchema(std::vector<CovariateSpec> specs) : specs_(std::move(specs)) {
  std::set<std::string> seen;
  for (const auto& s : specs_) {
    if (s.name == kIntercept)
      throw SchemaError("'intercept' is implicit and cannot be listed in the schema", s.name);
    if (!seen.insert(s.name).second) throw SchemaError("duplicate covariate '" + s.name + "'", s.name);
    if (s.kind == CovariateKind::continuous_spline) {
      if (!is_continuous_covariate(s.name))
        throw SchemaError("'" + s.name + "' is not a continuous covariate", s.name);
      if (s.degree < 0) throw SchemaError("spline degree must be >= 0 for '" + s.name + "'", s.name);
      if (s.df < 1 || s.df < s.degree)
        throw SchemaError("spline df must be >= max(1, degree) for '" + s.name + "'", s.name);
    } else {
      if (!is_binary_covariate(s.name))
        throw SchemaError("'" + s.name + "' is not a binary covariate", s.name);
      const bool ok = s.name == "sex" ? (s.reference == "female" || s.reference == "male")
                                      : (s.reference == "rural" || s.reference == "urban");
      if (!ok) throw SchemaError("bad reference level '" + s.reference + "' for '" + s.name + "'", s.name);
    }
  }
}

const CovariateSpec* CovariateSchema::find(std::string_view name) const {
  for (const auto& s : specs_)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<std::string> CovariateSchema::continuous_names() const {
  std::vector<std::string> out;
  for (const auto& s : specs_)
    if (s.kind == CovariateKind::continuous_spline) out.push_back(s.name);
  return out;
}

std::vector<std::string> CovariateSchema::group_names() const {
  std::vector<std::string> out{std::string(kIntercept)};
  for (const auto& s : specs_) out.push_back(s.name);
  return out;
}

CovariateSchema CovariateSchema::default_schema() {
  auto spline = [](std::string name) {
    return CovariateSpec{std::move(name), CovariateKind::continuous_spline, 3, 4, {}};
  };
  auto binary = [](std::string name, std::string ref) {
    return CovariateSpec{std::move(name), CovariateKind::binary, 0, 0, std::move(ref)};
  };
  return CovariateSchema({spline("wealth_rank"), spline("maternal_education"),
                          spline("maternal_age"), spline("birth_order"),
                          spline("birth_interval"), binary("sex", "female"),
                          binary("residence", "rural")});
}

bool is_continuous_covariate(std::string_view name) {
  return std::find(std::begin(kContinuous), std::end(kContinuous), name) != std::end(kContinuous);
}

bool is_binary_covariate(std::string_view name) {
  return std::find(std::begin(kBinary), std::end(kBinary), name) != std::end(kBinary);
}

std::optional<double> continuous_value(const BirthRecord& r, std::string_view name) {
  if (name == "maternal_age") return r.maternal_age;
  if (name == "maternal_education") return r.maternal_education;
  if (name == "birth_order") return static_cast<double>(r.birth_order);
  if (name == "birth_interval") return r.birth_interval;
  if (name == "wealth_rank") return r.wealth_rank;
  throw SchemaError("unknown continuous covariate '" + std::string(name) + "'", std::string(name));
}

double CenteringConstants::at(const std::string& name) const {
  const auto it = means.find(name);
  if (it == means.end()) throw SchemaError("no centering constant for '" + name + "'", name);
  return it->second;
}

SurveySample ingest_csv(const std::filesystem::path& path, const CovariateSchema& schema,
                        int survey_year, SurveyId survey_id) {
  std::ifstream in(path);
  if (!in) throw Error("dataset", "cannot open '" + path.string() + "'");

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      have_header = true;
      break;
    }
  }
  if (!have_header) throw EmptyFileError(path.string());

  // Strip a UTF-8 byte-order mark.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::map<std::string, std::size_t, std::less<>> col;
  {
    const auto header = split(line, ',');
    for (std::size_t i = 0; i < header.size(); ++i) col.emplace(std::string(trim(header[i])), i);
  }
  std::vector<std::string> required{"outcome", "cluster_id", "maternal_age", "wealth_rank"};
  for (const auto& s : schema.specs()) required.push_back(s.name);
  for (const auto& name : required)
    if (!col.contains(name)) throw SchemaError("missing column '" + name + "'", name);

  auto index_of = [&](std::string_view name) -> std::optional<std::size_t> {
    const auto it = col.find(name);
    if (it == col.end()) return std::nullopt;
    return it->second;
  };
  const auto outcome_i = *index_of("outcome");
  const auto cluster_i = *index_of("cluster_id");

  SurveySample sample(survey_id, survey_year);
  std::size_t dropped = 0;
  std::size_t data_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++data_rows;
    const auto cells = split(line, ',');
    if (cells.size() != col.size())
      throw RowError(line_no, "expected " + std::to_string(col.size()) + " cells, found " +
                                  std::to_string(cells.size()));

    auto cell = [&](std::string_view name) -> std::optional<std::string_view> {
      const auto i = index_of(name);
      if (!i) return std::nullopt;
      return trim(cells[*i]);
    };
    auto number = [&](std::string_view name, double fallback) {
      const auto c = cell(name);
      return c ? parse_double(*c, line_no, name) : fallback;
    };

    BirthRecord r;
    const double y = parse_double(trim(cells[outcome_i]), line_no, "outcome");
    if (y != 0.0 && y != 1.0) throw RowError(line_no, "outcome must be 0 or 1");
    r.outcome = static_cast<int>(y);
    r.maternal_age = number("maternal_age", 0.0);
    r.maternal_education = number("maternal_education", 0.0);
    const double order = number("birth_order", 1.0);
    if (order < 1.0 || order != std::floor(order))
      throw RowError(line_no, "birth_order must be an integer >= 1");
    r.birth_order = static_cast<int>(order);
    if (const auto c = cell("birth_interval"); c && !c->empty() && *c != "NA")
      r.birth_interval = parse_double(*c, line_no, "birth_interval");
    if (const auto c = cell("sex")) {
      if (*c == "female") r.sex = Sex::female;
      else if (*c == "male") r.sex = Sex::male;
      else throw RowError(line_no, "sex must be 'female' or 'male', got '" + std::string(*c) + "'");
    }
    if (const auto c = cell("residence")) {
      if (*c == "rural") r.residence = Residence::rural;
      else if (*c == "urban") r.residence = Residence::urban;
      else throw RowError(line_no, "residence must be 'rural' or 'urban', got '" + std::string(*c) + "'");
    }
    r.wealth_rank = number("wealth_rank", 0.0);
    if (r.wealth_rank < 0.0 || r.wealth_rank > 1.0)
      throw RowError(line_no, "wealth_rank must lie in [0, 1]");
    r.cluster_id = std::string(trim(cells[cluster_i]));
    if (r.cluster_id.empty()) throw RowError(line_no, "empty cluster_id");

    if (r.maternal_age < kMinMaternalAge || r.maternal_age > kMaxMaternalAge) {
      ++dropped;
      continue;
    }
    sample.add(std::move(r));
  }
  if (data_rows == 0) throw EmptyFileError(path.string());
  sample.set_dropped_rows(dropped);
  return sample;
}

void write_csv(const std::filesystem::path& path, const SurveySample& sample) {
  std::ostringstream out;
  for (std::size_t i = 0; i < std::size(kCsvColumns); ++i)
    out << (i ? "," : "") << kCsvColumns[i];
  out << '\n';
  sample.for_each_birth([&](const BirthRecord& r) {
    out << r.outcome << ',' << format_double(r.maternal_age) << ','
        << format_double(r.maternal_education) << ',' << r.birth_order << ','
        << (r.birth_interval ? format_double(*r.birth_interval) : std::string()) << ','
        << to_string(r.sex) << ',' << to_string(r.residence) << ','
        << format_double(r.wealth_rank) << ',' << r.cluster_id << '\n';
  });
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("dataset", "cannot write '" + path.string() + "'");
  f << out.str();
}

CenteringConstants compute_centering(const SurveySample& sample1, const CovariateSchema& schema,
                                     double poor_quantile) {
  if (sample1.empty()) throw InvalidArgument("dataset", "cannot center on an empty sample");
  if (!(poor_quantile > 0.0 && poor_quantile <= 1.0))
    throw InvalidArgument("dataset", "poor_quantile must lie in (0, 1]");

  const auto names = schema.continuous_names();
  auto means_over = [&](auto&& keep) {
    std::map<std::string, double> sums;
    std::map<std::string, long> counts;
    sample1.for_each_birth([&](const BirthRecord& r) {
      if (!keep(r)) return;
      for (const auto& n : names)
        if (const auto v = continuous_value(r, n)) {
          sums[n] += *v;
          counts[n] += 1;
        }
    });
    std::map<std::string, double> out;
    for (const auto& n : names)
      if (counts[n] > 0) out[n] = sums[n] / static_cast<double>(counts[n]);
    return out;
  };

  CenteringConstants c;
  const auto full = means_over([](const BirthRecord&) { return true; });
  c.means = means_over([&](const BirthRecord& r) { return r.wealth_rank <= poor_quantile; });
  for (const auto& n : names) {
    if (c.means.contains(n)) continue;
    c.fallback = true;
    const auto it = full.find(n);
    if (it == full.end())
      throw SchemaError("covariate '" + n + "' has no observed values in survey 1", n);
    c.means[n] = it->second;
  }
  return c;
}

const ColumnGroup* DesignMatrix::group(std::string_view name) const {
  for (const auto& g : column_groups)
    if (g.name == name) return &g;
  return nullptr;
}

Eigen::VectorXd DesignMatrix::column_means() const { return values.colwise().mean().transpose(); }

DesignBasis make_basis(const SurveySample& knot_source, const CovariateSchema& schema,
                       const CenteringConstants& centering) {
  if (knot_source.empty()) throw InvalidArgument("dataset", "knot source sample is empty");
  DesignBasis basis{schema, centering, {}, 0.0, false};
  for (const auto& spec : schema.specs()) {
    if (spec.kind != CovariateKind::continuous_spline) continue;
    std::vector<double> raw;
    bool missing = false;
    knot_source.for_each_birth([&](const BirthRecord& r) {
      if (const auto v = continuous_value(r, spec.name)) raw.push_back(*v);
      else missing = true;
    });
    if (raw.empty())
      throw SchemaError("covariate '" + spec.name + "' is absent from every record", spec.name);
    if (missing && spec.name != "birth_interval")
      throw SchemaError("covariate '" + spec.name + "' is missing for some records", spec.name);

    if (spec.name == "birth_interval") {
      std::vector<double> sorted = raw;
      std::sort(sorted.begin(), sorted.end());
      const auto n = sorted.size();
      basis.interval_median =
          n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
      basis.interval_indicator = missing;  // knots use observed intervals only
    }
    const double shift = centering.at(spec.name);
    for (auto& v : raw) v -= shift;
    try {
      basis.knots.emplace(spec.name, place_knots(raw, spec.degree, spec.df));
    } catch (const InvalidArgument&) {
      throw DegenerateDesignError(spec.name);
    }
  }
  return basis;
}

namespace {

// Writes columns 1..p-1 of one record into `row`.
void fill_row(const BirthRecord& r, const DesignBasis& basis, double* row) {
  int col = 1;
  for (const auto& spec : basis.schema.specs()) {
    if (spec.kind == CovariateKind::binary) {
      const std::string_view level = spec.name == "sex" ? to_string(r.sex) : to_string(r.residence);
      row[col++] = level == spec.reference ? 0.0 : 1.0;
      continue;
    }
    auto v = continuous_value(r, spec.name);
    const bool imputed = !v.has_value();
    if (imputed) {
      if (spec.name != "birth_interval")
        throw SchemaError("covariate '" + spec.name + "' is absent from a record", spec.name);
      v = basis.interval_median;
    }
    const auto& knots = basis.knots.at(spec.name);
    const auto b = bspline_basis(*v - basis.centering.at(spec.name), knots);
    // The first basis function is dropped: the intercept spans it.
    for (std::size_t j = 1; j < b.size(); ++j) row[col++] = b[j];
    if (spec.name == "birth_interval" && basis.interval_indicator) row[col++] = imputed ? 1.0 : 0.0;
  }
}

struct Layout {
  std::vector<std::string> names;
  std::vector<ColumnGroup> groups;
};

Layout layout(const DesignBasis& basis) {
  Layout out;
  out.names.emplace_back(kIntercept);
  int col = 1;
  for (const auto& spec : basis.schema.specs()) {
    ColumnGroup g{spec.name, col, col};
    if (spec.kind == CovariateKind::binary) {
      const std::string level = spec.name == "sex"
                                    ? (spec.reference == "female" ? "male" : "female")
                                    : (spec.reference == "rural" ? "urban" : "rural");
      out.names.push_back(spec.name + ":" + level);
      ++col;
    } else {
      const int n = basis.knots.at(spec.name).basis_size() - 1;
      for (int j = 1; j <= n; ++j) out.names.push_back(spec.name + ":bs" + std::to_string(j));
      col += n;
      if (spec.name == "birth_interval" && basis.interval_indicator) {
        out.names.push_back("birth_interval:missing");
        ++col;
      }
    }
    g.end = col;
    out.groups.push_back(g);
  }
  return out;
}

}  // namespace

Eigen::VectorXd design_row(const BirthRecord& record, const DesignBasis& basis) {
  const auto lay = layout(basis);
  Eigen::VectorXd row(static_cast<Eigen::Index>(lay.names.size()));
  row[0] = 1.0;
  fill_row(record, basis, row.data());
  return row;
}

DesignMatrix build_design(const SurveySample& sample, const DesignBasis& basis) {
  if (sample.empty()) throw InvalidArgument("dataset", "cannot build a design from an empty sample");
  const auto lay = layout(basis);
  const auto n = static_cast<Eigen::Index>(sample.births());
  const auto p = static_cast<Eigen::Index>(lay.names.size());

  DesignMatrix d;
  d.values.resize(n, p);
  d.outcome.resize(n);
  d.cluster_index.reserve(n);
  d.column_names = lay.names;
  d.column_groups = lay.groups;

  Eigen::Index i = 0;
  for (const auto& cluster : sample.clusters()) {
    const int ordinal = static_cast<int>(d.cluster_ids.size());
    d.cluster_ids.push_back(cluster.id);
    for (const auto& r : cluster.births) {
      d.values(i, 0) = 1.0;
      fill_row(r, basis, d.values.row(i).data());
      d.outcome[i] = r.outcome;
      d.cluster_index.push_back(ordinal);
      ++i;
    }
  }

  for (Eigen::Index c = 1; c < p; ++c) {
    const double first = d.values(0, c);
    if ((d.values.col(c).array() == first).all())
      throw DegenerateDesignError(d.column_names[static_cast<std::size_t>(c)]);
  }
  return d;
}

DesignMatrix build_design(const SurveySample& sample, const CovariateSchema& schema,
                          const CenteringConstants& centering, const SurveySample& knot_source) {
  return build_design(sample, make_basis(knot_source, schema, centering));
}

}  // namespace elm
