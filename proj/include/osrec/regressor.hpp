#pragma once

#include <array>
#include <span>
#include <vector>

#include "osrec/types.hpp"

namespace osrec {

inline constexpr int kFeatureDims = 14;
using Feature14 = std::array<double, kFeatureDims>;

// Quadratic polynomial expansion of the four properties: the raw values
// followed by all pairwise products in lexicographic order
// (k^2, k*n, k*p, k*u, n^2, n*p, n*u, p^2, p*u, u^2).
Feature14 feature_map(const PropertySample& x);

// Maps 14-dim features to predicted cluster mean and variance. Weight rows
// are stored dense (4 x 14, row-major). Immutable after fit.
struct RegressionModel {
    std::vector<double> mean_weights;  // 4 x 14
    std::vector<double> var_weights;   // 4 x 14
    double lambda_mean = 1e-3;
    double lambda_var = 1e-3;
    Vec4 variance_floor{};
    int training_columns = 0;  // M = samples used to build the design matrix

    bool standardized = false;
    Feature14 feature_shift{};  // active when standardized
    Feature14 feature_scale{};

    // Training-data envelopes for the random-parameter ablation: per-feature
    // bounds of the raw properties and of the per-class variances.
    Vec4 sample_lo{}, sample_hi{};
    Vec4 class_var_lo{}, class_var_hi{};

    Vec4 predict_mean(const PropertySample& x) const;
    Vec4 predict_variance_raw(const PropertySample& x) const;  // pre-floor
};

// W = T A^T (A A^T + lambda I)^-1 by Cholesky-type factorisation of the
// regularised Gram matrix. A is K x M column-major (features per column),
// targets are D x M; the result is D x K row-major. A singular system with
// lambda == 0 is rejected with a hint to use lambda > 0.
std::vector<double> ridge_solve(std::span<const double> design, int feature_dim,
                                int columns, std::span<const double> targets,
                                int target_dim, double lambda);

// Builds one design column per training sample and regresses the sample's
// class-level mean and variance on its features (targets replicated across
// the class's samples, so M = sum of class sizes).
RegressionModel fit_regression(const Dataset& dataset,
                               std::span<const int> train_indices,
                               double lambda_mean, double lambda_var,
                               bool standardize = false);

struct ClusterParams {
    Vec4 mean;
    Vec4 variance;  // floored, always positive
};

// New-cluster parameters for a novel sample: the centre interpolates between
// the regression prediction (alpha=0) and the sample itself (alpha=1); the
// predicted variance is scaled by beta and floored per component.
ClusterParams predict_cluster_params(const RegressionModel& model,
                                     const PropertySample& x, double alpha,
                                     double beta);

}  // namespace osrec
