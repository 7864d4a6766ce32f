#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "elmdecomp/dataset.hpp"
#include "elmdecomp/synthesize.hpp"

namespace elm::cli {

/// Intercept, linear maternal education, sex and residence: four columns.
CovariateSchema four_column_schema();

/// Two surveys of `clusters` x `births` at the given coefficients, sharing
/// one cluster variance. Survey 2 has more educated, more urban mothers.
DgpConfig four_column_dgp(std::vector<double> beta1, std::vector<double> beta2, double sigma2,
                          int clusters = 200, int births = 25);

struct BuiltDesigns {
  SurveySample s1, s2;
  DesignBasis basis;
  DesignMatrix d1, d2;
};

/// Centering from survey 1, knots from the pooled sample.
BuiltDesigns build_designs(SurveySample s1, SurveySample s2, const CovariateSchema& schema,
                           double poor_quantile);

/// Random design with an intercept and groups "g0", "g1", ... of the given
/// widths; entries uniform on (-1, 1).
DesignMatrix fuzz_design(std::mt19937_64& rng, int rows, const std::vector<int>& group_sizes);

Eigen::VectorXd fuzz_vector(std::mt19937_64& rng, Eigen::Index n, double sd);

}  // namespace elm::cli
