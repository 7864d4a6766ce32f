#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "elmdecomp/bspline.hpp"

namespace elm {

enum class SurveyId { S1, S2 };
enum class Sex { female, male };
enum class Residence { rural, urban };

std::string_view to_string(SurveyId id);
std::string_view to_string(Sex s);
std::string_view to_string(Residence r);

/// One live birth. `birth_interval` is absent for first births.
struct BirthRecord {
  int outcome = 0;  // 1 = died before age one
  double maternal_age = 0.0;
  double maternal_education = 0.0;
  int birth_order = 1;
  std::optional<double> birth_interval;
  Sex sex = Sex::female;
  Residence residence = Residence::rural;
  double wealth_rank = 0.0;
  std::string cluster_id;
  SurveyId survey_id = SurveyId::S1;

  friend bool operator==(const BirthRecord&, const BirthRecord&) = default;
};

struct Cluster {
  std::string id;
  std::vector<BirthRecord> births;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// All births of one survey, clusters in first-appearance order.
class SurveySample {
 public:
  SurveySample() = default;
  SurveySample(SurveyId id, int year) : survey_id_(id), survey_year_(year) {}

  void add(BirthRecord record);

  SurveyId survey_id() const { return survey_id_; }
  int survey_year() const { return survey_year_; }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  std::size_t births() const { return births_; }
  bool empty() const { return births_ == 0; }

  // Rows dropped during ingestion because maternal age was outside [15, 45].
  std::size_t dropped_rows() const { return dropped_rows_; }
  void set_dropped_rows(std::size_t n) { dropped_rows_ = n; }

  template <typename Fn>
  void for_each_birth(Fn&& fn) const {
    for (const auto& c : clusters_)
      for (const auto& b : c.births) fn(b);
  }

  friend bool operator==(const SurveySample&, const SurveySample&) = default;

 private:
  SurveyId survey_id_ = SurveyId::S1;
  int survey_year_ = 0;
  std::vector<Cluster> clusters_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t births_ = 0;
  std::size_t dropped_rows_ = 0;
};

/// Union of two samples, used as the knot source so both surveys share one
/// spline basis. Cluster ids are prefixed with the survey id.
SurveySample pool(const SurveySample& a, const SurveySample& b);

enum class CovariateKind { continuous_spline, binary };

struct CovariateSpec {
  std::string name;
  CovariateKind kind = CovariateKind::continuous_spline;
  int degree = 3;             // continuous_spline only
  int df = 4;                 // continuous_spline only: basis columns kept
  std::string reference;      // binary only: level coded 0

  friend bool operator==(const CovariateSpec&, const CovariateSpec&) = default;
};

/// Ordered covariate specs. The intercept is implicit and always first; the
/// spec order is the default decomposition order.
class CovariateSchema {
 public:
  CovariateSchema() = default;
  explicit CovariateSchema(std::vector<CovariateSpec> specs);

  const std::vector<CovariateSpec>& specs() const { return specs_; }
  const CovariateSpec* find(std::string_view name) const;
  std::vector<std::string> continuous_names() const;
  // "intercept" followed by the covariate names.
  std::vector<std::string> group_names() const;

  /// Cubic, df 4 splines for the continuous covariates, in the column order
  /// of the coefficient-by-coefficient table.
  static CovariateSchema default_schema();

  friend bool operator==(const CovariateSchema&, const CovariateSchema&) = default;

 private:
  std::vector<CovariateSpec> specs_;
};

inline constexpr std::string_view kIntercept = "intercept";

// Names accepted in a schema; these are the CSV covariate columns.
bool is_continuous_covariate(std::string_view name);
bool is_binary_covariate(std::string_view name);

/// Value of a continuous covariate on a record; nullopt when absent
/// (only birth_interval can be absent).
std::optional<double> continuous_value(const BirthRecord& r, std::string_view name);

struct CenteringConstants {
  std::map<std::string, double> means;
  // True when no record fell in the poorest quantile and full-sample means
  // were used instead.
  bool fallback = false;

  double at(const std::string& name) const;
  friend bool operator==(const CenteringConstants&, const CenteringConstants&) = default;
};

/// Parses a birth-level CSV. Rows with maternal age outside [15, 45] are
/// dropped and counted in `dropped_rows()`.
SurveySample ingest_csv(const std::filesystem::path& path, const CovariateSchema& schema,
                        int survey_year, SurveyId survey_id = SurveyId::S1);

/// Writes the sample in the same CSV layout ingest_csv reads. Doubles use
/// shortest round-trip formatting.
void write_csv(const std::filesystem::path& path, const SurveySample& sample);

CenteringConstants compute_centering(const SurveySample& sample1, const CovariateSchema& schema,
                                     double poor_quantile = 0.2);

struct ColumnGroup {
  std::string name;
  int begin = 0;  // first column
  int end = 0;    // one past the last column

  int size() const { return end - begin; }
  friend bool operator==(const ColumnGroup&, const ColumnGroup&) = default;
};

/// Expanded, centered design for one survey. Column 0 is the intercept.
struct DesignMatrix {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> values;
  std::vector<std::string> column_names;
  std::vector<ColumnGroup> column_groups;  // covariate groups, columns 1..p-1
  std::vector<int> cluster_index;          // per-row cluster ordinal
  std::vector<std::string> cluster_ids;    // ordinal -> id
  Eigen::VectorXd outcome;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  int clusters() const { return static_cast<int>(cluster_ids.size()); }
  const ColumnGroup* group(std::string_view name) const;
  Eigen::VectorXd column_means() const;
};

/// Spline knots, imputation constants and level coding shared by both
/// surveys' designs.
struct DesignBasis {
  CovariateSchema schema;
  CenteringConstants centering;
  std::map<std::string, SplineKnots> knots;  // keyed by covariate, centered scale
  double interval_median = 0.0;              // raw scale, imputes missing intervals
  bool interval_indicator = false;           // knot source had missing intervals
};

DesignBasis make_basis(const SurveySample& knot_source, const CovariateSchema& schema,
                       const CenteringConstants& centering);

DesignMatrix build_design(const SurveySample& sample, const DesignBasis& basis);

DesignMatrix build_design(const SurveySample& sample, const CovariateSchema& schema,
                          const CenteringConstants& centering, const SurveySample& knot_source);

/// Design row for a single record (no outcome, no cluster bookkeeping).
Eigen::VectorXd design_row(const BirthRecord& record, const DesignBasis& basis);

}  // namespace elm
