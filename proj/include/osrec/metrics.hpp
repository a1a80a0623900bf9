#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "osrec/types.hpp"

namespace osrec {

// Cross-tabulation of two labelings: rows follow the first argument, columns
// the second, ids remapped densely in order of first appearance.
struct ContingencyTable {
    std::vector<std::vector<std::int64_t>> counts;
    std::vector<std::int64_t> row_sums;
    std::vector<std::int64_t> col_sums;
    std::int64_t total = 0;

    static ContingencyTable from_labels(std::span<const int> a,
                                        std::span<const int> b);
};

struct DetectionAccuracy {
    double known = 0.0;
    double novel = 0.0;
    double overall = 0.0;
};

// known = fraction of truly-known samples decided known, novel likewise for
// novel; overall = correct / total. A side with no samples scores 1.
DetectionAccuracy detection_accuracy(const std::vector<bool>& decided_novel,
                                     const std::vector<bool>& truly_novel);

// Fraction of exact class matches; caller restricts to samples decided known
// whose truth is known.
double recognition_rate(std::span<const int> predicted,
                        std::span<const int> truth);

// Chance-corrected partition agreement in [-1,1]. Degenerate denominator
// (both partitions trivial) yields 1 for identical partitions, else 0.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

// One repetition's scores.
struct TrialResult {
    double known_accuracy = 0.0;
    double novel_accuracy = 0.0;
    double overall_accuracy = 0.0;
    double recognition = 0.0;
    double novel_ari = 0.0;
    int cluster_count = 0;
    int outlier_count = 0;
    int ari_sample_count = 0;
    RngSeed seed = 0;
};

}  // namespace osrec
