#include "osrec/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <string>

namespace osrec {

namespace {

std::atomic<std::uint64_t> g_prob_checks{0};
std::atomic<std::uint64_t> g_prob_failures{0};

// Per-class log joint: ln prior_y + ln N(x; mean_y, diag var_y).
void log_joints(const ClassifierModel& m, const PropertySample& x,
                std::vector<double>& out) {
    const Vec4 v = x.values();
    out.resize(m.class_count);
    for (int y = 0; y < m.class_count; ++y) {
        double s = std::log(m.priors[y]);
        for (int f = 0; f < kPropertyDims; ++f) {
            const double var = m.variances[y][f];
            const double d = v[f] - m.means[y][f];
            s += -0.5 * (std::log(2.0 * M_PI * var) + d * d / var);
        }
        out[y] = s;
    }
}

double log_sum_exp(const std::vector<double>& s) {
    const double m = *std::max_element(s.begin(), s.end());
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (double v : s) acc += std::exp(v - m);
    return m + std::log(acc);
}

}  // namespace

std::uint64_t probability_checks_run() { return g_prob_checks.load(); }
std::uint64_t probability_check_failures() { return g_prob_failures.load(); }

void note_probability_vector(std::span<const double> probabilities) {
    double sum = 0.0;
    for (double p : probabilities) sum += p;
    g_prob_checks.fetch_add(1, std::memory_order_relaxed);
    if (std::abs(sum - 1.0) > 1e-12)
        g_prob_failures.fetch_add(1, std::memory_order_relaxed);
}

ClassifierModel fit_classifier(const Dataset& dataset,
                               std::span<const int> train_indices) {
    std::map<int, std::vector<int>> by_class;
    for (int i : train_indices) by_class[dataset.rows[i].class_id].push_back(i);
    if (by_class.size() < 2)
        throw DataError("classifier fit needs at least 2 classes, got " +
                        std::to_string(by_class.size()));

    // Global per-feature variance sets the scale of the variance floor.
    Vec4 global_mean{}, global_m2{};
    std::size_t n = 0;
    for (int i : train_indices) {
        const Vec4 v = dataset.rows[i].sample.values();
        ++n;
        for (int f = 0; f < kPropertyDims; ++f) {
            const double delta = v[f] - global_mean[f];
            global_mean[f] += delta / static_cast<double>(n);
            global_m2[f] += delta * (v[f] - global_mean[f]);
        }
    }

    ClassifierModel m;
    for (int f = 0; f < kPropertyDims; ++f) {
        const double global_var = n > 1 ? global_m2[f] / static_cast<double>(n - 1) : 0.0;
        m.variance_floor[f] = std::max(1e-9 * global_var, 1e-12);
    }

    m.class_count = static_cast<int>(by_class.size());
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
        for (int f = 0; f < kPropertyDims; ++f) {
            var[f] /= static_cast<double>(rows.size() - 1);
            var[f] = std::max(var[f], m.variance_floor[f]);
        }
        m.class_ids.push_back(class_id);
        m.means.push_back(mean);
        m.variances.push_back(var);
        m.priors.push_back(static_cast<double>(rows.size()) /
                           static_cast<double>(train_indices.size()));
    }
    return m;
}

double log_likelihood(const ClassifierModel& model, const PropertySample& x) {
    if (model.class_count == 0) throw DataError("classifier not fitted");
    std::vector<double> s;
    log_joints(model, x, s);
    return log_sum_exp(s);
}

std::vector<double> posterior(const ClassifierModel& model,
                              const PropertySample& x) {
    if (model.class_count == 0) throw DataError("classifier not fitted");
    std::vector<double> s;
    log_joints(model, x, s);
    const double m = *std::max_element(s.begin(), s.end());
    double total = 0.0;
    for (double& v : s) {
        v = std::exp(v - m);
        total += v;
    }
    for (double& v : s) v /= total;
    note_probability_vector(s);
    return s;
}

double calibrate_threshold(const ClassifierModel& model, const Dataset& dataset,
                           std::span<const int> train_indices, double quantile) {
    if (quantile < 0.0 || quantile >= 0.5)
        throw ConfigError("novelty quantile must be in [0, 0.5)");
    if (train_indices.empty()) throw DataError("empty calibration set");
    std::vector<double> lls;
    lls.reserve(train_indices.size());
    for (int i : train_indices)
        lls.push_back(log_likelihood(model, dataset.rows[i].sample));
    std::sort(lls.begin(), lls.end());
    const auto idx = std::min(lls.size() - 1,
                              static_cast<std::size_t>(std::floor(
                                  quantile * static_cast<double>(lls.size()))));
    return lls[idx];
}

Decision detect_and_classify(const ClassifierModel& model,
                             const PropertySample& x) {
    if (!model.threshold_set) throw DataError("novelty threshold not calibrated");
    if (log_likelihood(model, x) >= model.novelty_threshold) {
        const auto p = posterior(model, x);
        const int best = static_cast<int>(
            std::max_element(p.begin(), p.end()) - p.begin());
        return {false, model.class_ids[best]};
    }
    return {true, 0};
}

std::vector<Decision> classify_batch(const ClassifierModel& model,
                                     const Dataset& dataset,
                                     std::span<const int> stream_indices,
                                     int jobs) {
    const int n = static_cast<int>(stream_indices.size());
    std::vector<Decision> out(n);
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i)
            out[i] = detect_and_classify(model, dataset.rows[stream_indices[i]].sample);
        return out;
    }
#pragma omp parallel for schedule(static) num_threads(jobs)
    for (int i = 0; i < n; ++i)
        out[i] = detect_and_classify(model, dataset.rows[stream_indices[i]].sample);
    return out;
}

}  // namespace osrec
