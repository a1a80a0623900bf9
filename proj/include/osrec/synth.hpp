#pragma once

#include <array>
#include <cstdint>

#include "osrec/types.hpp"

namespace osrec {

// Parameters for one synthetic class pool: each class is a diagonal Gaussian
// in property space, with its mean drawn uniformly from [mean_lo, mean_hi]
// per feature and its per-feature sigma taken from [sigma_lo, sigma_hi].
//
// sigma_mean_coupling in [0,1] ties a class's sigma to where its mean sits in
// the mean range (1 = fully determined by the mean, 0 = independent draw).
// Coupled sigmas make cluster scale predictable from the features themselves,
// which is the regime the cluster-parameter regression is built for.
struct SyntheticSpec {
    int classes = 20;
    int samples_per_class = 25;
    // Sigma defaults are 6.5% of the mean at both ends of each range, so with
    // full coupling the noise is relative (sigma proportional to the mean, as
    // for a measurement whose error scales with the measured value). That
    // makes the class-variance field a pure quadratic of the class position,
    // which the cluster-parameter regression can represent exactly.
    Vec4 mean_lo{0.6, 0.3, 0.25, 0.3};
    Vec4 mean_hi{3.0, 1.5, 0.85, 1.2};
    Vec4 sigma_lo{0.039, 0.0195, 0.01625, 0.0195};
    Vec4 sigma_hi{0.195, 0.0975, 0.05525, 0.078};
    double separation = 8.0;  // min pairwise mean distance, in units of the
                              // larger per-feature sigma of the two classes
    double sigma_mean_coupling = 1.0;
    std::uint64_t seed = 20230101;
};

struct SyntheticResult {
    Dataset dataset;
    std::vector<Vec4> class_means;
    std::vector<Vec4> class_sigmas;
    int clipped_components = 0;  // sample components pushed back into range
};

// Separation between two classes: Euclidean norm of the mean difference with
// each feature scaled by the larger of the two classes' sigmas.
double class_separation(const Vec4& mean_a, const Vec4& sigma_a,
                        const Vec4& mean_b, const Vec4& sigma_b);

// Deterministic in (spec, seed). Class means are rejected and resampled until
// all pairwise separations reach spec.separation; throws DataError when that
// fails within a bounded number of attempts.
SyntheticResult generate_synthetic(const SyntheticSpec& spec);

}  // namespace osrec
