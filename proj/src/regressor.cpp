#include "osrec/regressor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace osrec {

Feature14 feature_map(const PropertySample& x) {
    const Vec4 v = x.values();
    Feature14 a;
    int idx = 0;
    for (int f = 0; f < kPropertyDims; ++f) a[idx++] = v[f];
    for (int f = 0; f < kPropertyDims; ++f)
        for (int g = f; g < kPropertyDims; ++g) a[idx++] = v[f] * v[g];
    return a;
}

std::vector<double> ridge_solve(std::span<const double> design, int feature_dim,
                                int columns, std::span<const double> targets,
                                int target_dim, double lambda) {
    if (columns < 1) throw DataError("ridge_solve needs at least one column");
    if (lambda < 0.0) throw DataError("ridge_solve lambda must be >= 0");
    if (static_cast<int>(design.size()) != feature_dim * columns ||
        static_cast<int>(targets.size()) != target_dim * columns)
        throw DataError("ridge_solve dimension mismatch");

    using Mat = Eigen::MatrixXd;
    Eigen::Map<const Mat> A(design.data(), feature_dim, columns);
    Eigen::Map<const Mat> T(targets.data(), target_dim, columns);

    Mat gram = A * A.transpose();
    gram.diagonal().array() += lambda;
    const Mat rhs = T * A.transpose();  // D x K

    Eigen::LDLT<Mat> ldlt(gram);
    if (ldlt.info() != Eigen::Success)
        throw DataError("ridge_solve: factorisation failed; use lambda > 0");
    // A rank-deficient gram can still give a consistent system with a small
    // residual, so reject on the factorisation pivots instead.
    const Eigen::VectorXd pivots = ldlt.vectorD();
    const double pivot_tol = feature_dim *
                             std::numeric_limits<double>::epsilon() *
                             std::max(pivots.maxCoeff(), 0.0);
    if (!(pivots.minCoeff() > pivot_tol))
        throw DataError(
            "ridge_solve: system is singular or badly conditioned; use lambda > 0");
    // gram is symmetric, so solving gram * W^T = rhs^T gives W row by row.
    const Mat W = ldlt.solve(rhs.transpose()).transpose();

    const double residual = (W * gram - rhs).norm();
    const double scale = std::max(1.0, T.norm() * A.norm());
    if (!(residual <= 1e-6 * scale) || !W.allFinite())
        throw DataError(
            "ridge_solve: system is singular or badly conditioned; use lambda > 0");

    std::vector<double> out(static_cast<std::size_t>(target_dim) * feature_dim);
    for (int r = 0; r < target_dim; ++r)
        for (int c = 0; c < feature_dim; ++c)
            out[static_cast<std::size_t>(r) * feature_dim + c] = W(r, c);
    return out;
}

namespace {

Feature14 standardized_features(const RegressionModel& m, const PropertySample& x) {
    Feature14 a = feature_map(x);
    if (m.standardized)
        for (int i = 0; i < kFeatureDims; ++i)
            a[i] = (a[i] - m.feature_shift[i]) / m.feature_scale[i];
    return a;
}

Vec4 apply_weights(const std::vector<double>& w, const Feature14& a) {
    Vec4 out{};
    for (int r = 0; r < kPropertyDims; ++r) {
        double s = 0.0;
        for (int c = 0; c < kFeatureDims; ++c)
            s += w[static_cast<std::size_t>(r) * kFeatureDims + c] * a[c];
        out[r] = s;
    }
    return out;
}

}  // namespace

Vec4 RegressionModel::predict_mean(const PropertySample& x) const {
    return apply_weights(mean_weights, standardized_features(*this, x));
}

Vec4 RegressionModel::predict_variance_raw(const PropertySample& x) const {
    return apply_weights(var_weights, standardized_features(*this, x));
}

RegressionModel fit_regression(const Dataset& dataset,
                               std::span<const int> train_indices,
                               double lambda_mean, double lambda_var,
                               bool standardize) {
    if (train_indices.empty()) throw DataError("fit_regression: no training rows");

    std::map<int, std::vector<int>> by_class;
    for (int i : train_indices) by_class[dataset.rows[i].class_id].push_back(i);

    RegressionModel m;
    m.lambda_mean = lambda_mean;
    m.lambda_var = lambda_var;

    // Class-level targets: per-feature mean and unbiased variance.
    std::map<int, Vec4> class_mean, class_var;
    for (const auto& [class_id, rows] : by_class) {
        if (rows.size() < 2)
            throw DataError("class " + std::to_string(class_id) +
                            " has fewer than 2 training samples");
        Vec4 mean{}, var{};
        for (int i : rows)
            for (int f = 0; f < kPropertyDims; ++f)
                mean[f] += dataset.rows[i].sample.values()[f];
        for (int f = 0; f < kPropertyDims; ++f)
            mean[f] /= static_cast<double>(rows.size());
        for (int i : rows)
            for (int f = 0; f < kPropertyDims; ++f) {
                const double d = dataset.rows[i].sample.values()[f] - mean[f];
                var[f] += d * d;
            }
        for (int f = 0; f < kPropertyDims; ++f)
            var[f] /= static_cast<double>(rows.size() - 1);
        class_mean[class_id] = mean;
        class_var[class_id] = var;
    }

    // Floor predictions at the upper quartile of the training class variances:
    // a freshly synthesised cluster should not assume it is tighter than the
    // bulk of the known classes, and the floor also catches variance
    // predictions that extrapolate to <= 0. An under-sized variance fragments
    // a true cluster into several accepted ones; an over-sized one is healed
    // once enough members accumulate and the parameters are refreshed, so the
    // floor errs on the wide side. Boundary tests are relative (scaled by the
    // predicted variance itself), which keeps even a generous floor from
    // reaching a neighbouring class at typical separations.
    for (int f = 0; f < kPropertyDims; ++f) {
        std::vector<double> vars;
        vars.reserve(class_var.size());
        for (const auto& [class_id, var] : class_var) vars.push_back(var[f]);
        std::sort(vars.begin(), vars.end());
        m.variance_floor[f] =
            std::max(vars[(3 * (vars.size() - 1)) / 4], 1e-12);
    }
    for (auto& [class_id, var] : class_var)
        for (int f = 0; f < kPropertyDims; ++f)
            var[f] = std::max(var[f], m.variance_floor[f]);

    const int columns = static_cast<int>(train_indices.size());
    m.training_columns = columns;

    std::vector<double> design(static_cast<std::size_t>(kFeatureDims) * columns);
    std::vector<double> mean_targets(static_cast<std::size_t>(kPropertyDims) * columns);
    std::vector<double> var_targets(static_cast<std::size_t>(kPropertyDims) * columns);
    std::vector<Feature14> features(columns);
    for (int c = 0; c < columns; ++c)
        features[c] = feature_map(dataset.rows[train_indices[c]].sample);

    if (standardize) {
        m.standardized = true;
        for (int i = 0; i < kFeatureDims; ++i) {
            double mu = 0.0;
            for (int c = 0; c < columns; ++c) mu += features[c][i];
            mu /= columns;
            double s2 = 0.0;
            for (int c = 0; c < columns; ++c) {
                const double d = features[c][i] - mu;
                s2 += d * d;
            }
            const double sd = std::sqrt(s2 / std::max(1, columns - 1));
            m.feature_shift[i] = mu;
            m.feature_scale[i] = sd > 1e-12 ? sd : 1.0;
            for (int c = 0; c < columns; ++c)
                features[c][i] = (features[c][i] - m.feature_shift[i]) / m.feature_scale[i];
        }
    }

    for (int c = 0; c < columns; ++c) {
        const auto& row = dataset.rows[train_indices[c]];
        for (int i = 0; i < kFeatureDims; ++i)
            design[static_cast<std::size_t>(i) + static_cast<std::size_t>(c) * kFeatureDims] =
                features[c][i];
        for (int f = 0; f < kPropertyDims; ++f) {
            mean_targets[static_cast<std::size_t>(f) +
                         static_cast<std::size_t>(c) * kPropertyDims] =
                class_mean[row.class_id][f];
            var_targets[static_cast<std::size_t>(f) +
                        static_cast<std::size_t>(c) * kPropertyDims] =
                class_var[row.class_id][f];
        }
    }

    m.mean_weights =
        ridge_solve(design, kFeatureDims, columns, mean_targets, kPropertyDims, lambda_mean);
    m.var_weights =
        ridge_solve(design, kFeatureDims, columns, var_targets, kPropertyDims, lambda_var);

    // Envelopes for the random-parameter ablation arm.
    for (int f = 0; f < kPropertyDims; ++f) {
        m.sample_lo[f] = std::numeric_limits<double>::infinity();
        m.sample_hi[f] = -std::numeric_limits<double>::infinity();
        m.class_var_lo[f] = std::numeric_limits<double>::infinity();
        m.class_var_hi[f] = -std::numeric_limits<double>::infinity();
    }
    for (int i : train_indices) {
        const Vec4 v = dataset.rows[i].sample.values();
        for (int f = 0; f < kPropertyDims; ++f) {
            m.sample_lo[f] = std::min(m.sample_lo[f], v[f]);
            m.sample_hi[f] = std::max(m.sample_hi[f], v[f]);
        }
    }
    for (const auto& [class_id, var] : class_var) {
        for (int f = 0; f < kPropertyDims; ++f) {
            m.class_var_lo[f] = std::min(m.class_var_lo[f], var[f]);
            m.class_var_hi[f] = std::max(m.class_var_hi[f], var[f]);
        }
    }
    return m;
}

ClusterParams predict_cluster_params(const RegressionModel& model,
                                     const PropertySample& x, double alpha,
                                     double beta) {
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must be in [0,1]");
    if (beta < 0.0) throw ConfigError("beta must be >= 0");
    const Vec4 predicted = model.predict_mean(x);
    const Vec4 raw_var = model.predict_variance_raw(x);
    const Vec4 v = x.values();
    ClusterParams out;
    for (int f = 0; f < kPropertyDims; ++f) {
        out.mean[f] = (1.0 - alpha) * predicted[f] + alpha * v[f];
        out.variance[f] = std::max(beta * raw_var[f], model.variance_floor[f]);
    }
    return out;
}

}  // namespace osrec
