#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "osrec/types.hpp"

namespace osrec {

// Per-known-class diagonal Gaussian model with class priors. Immutable after
// fit; all queries are pure and safe for concurrent readers.
struct ClassifierModel {
    int class_count = 0;              // N
    std::vector<int> class_ids;       // model index -> dataset class id
    std::vector<Vec4> means;
    std::vector<Vec4> variances;      // unbiased, floored
    std::vector<double> priors;       // sums to 1
    Vec4 variance_floor{};
    double novelty_threshold = 0.0;   // log scale; set via calibrate_threshold
    bool threshold_set = false;
};

// Fits per-class mean/variance/prior from the given training rows. Requires
// at least 2 classes and 2 samples per class. The variance floor is 1e-9 of
// the per-feature variance over all training rows (with a tiny absolute
// minimum), so constant features cannot produce singular Gaussians.
ClassifierModel fit_classifier(const Dataset& dataset,
                               std::span<const int> train_indices);

// ln sum_y prior_y * N(x; mean_y, diag var_y), stabilised via log-sum-exp.
double log_likelihood(const ClassifierModel& model, const PropertySample& x);

// p(y|x) over the model's classes; always sums to 1.
std::vector<double> posterior(const ClassifierModel& model,
                              const PropertySample& x);

// Novelty threshold as the q-th empirical quantile of the training rows'
// log-likelihood. The caller stores the result in the model.
double calibrate_threshold(const ClassifierModel& model, const Dataset& dataset,
                           std::span<const int> train_indices, double quantile);

// Low likelihood means novel; the threshold itself still counts as known.
Decision detect_and_classify(const ClassifierModel& model,
                             const PropertySample& x);

// Decides every sample of the stream. jobs <= 1 runs the serial reference
// loop; jobs > 1 splits the loop across OpenMP threads. Results are identical
// either way since each slot is written independently.
std::vector<Decision> classify_batch(const ClassifierModel& model,
                                     const Dataset& dataset,
                                     std::span<const int> stream_indices,
                                     int jobs);

// Running counters behind the inline probability checks (posterior and
// cluster membership vectors summing to 1). Exposed for the test suites.
std::uint64_t probability_checks_run();
std::uint64_t probability_check_failures();
void note_probability_vector(std::span<const double> probabilities);

}  // namespace osrec
