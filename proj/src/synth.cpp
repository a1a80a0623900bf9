#include "osrec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "osrec/rng.hpp"

namespace osrec {

double class_separation(const Vec4& mean_a, const Vec4& sigma_a,
                        const Vec4& mean_b, const Vec4& sigma_b) {
    double sum = 0.0;
    for (int f = 0; f < kPropertyDims; ++f) {
        const double s = std::max(sigma_a[f], sigma_b[f]);
        const double d = (mean_a[f] - mean_b[f]) / s;
        sum += d * d;
    }
    return std::sqrt(sum);
}

SyntheticResult generate_synthetic(const SyntheticSpec& spec) {
    if (spec.classes < 2) throw DataError("synthetic spec needs >= 2 classes");
    if (spec.samples_per_class < 2)
        throw DataError("synthetic spec needs >= 2 samples per class");
    if (spec.separation < 0.0) throw DataError("separation must be >= 0");
    for (int f = 0; f < kPropertyDims; ++f) {
        if (spec.mean_lo[f] > spec.mean_hi[f] || spec.sigma_lo[f] > spec.sigma_hi[f])
            throw DataError(std::string("invalid range for ") + property_name(f));
        if (spec.sigma_lo[f] <= 0.0)
            throw DataError(std::string("sigma range for ") + property_name(f) +
                            " must be positive");
    }

    Rng rng(spec.seed);
    SyntheticResult result;
    auto& means = result.class_means;
    auto& sigmas = result.class_sigmas;

    const int kMaxAttemptsPerClass = 2000;
    for (int c = 0; c < spec.classes; ++c) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttemptsPerClass; ++attempt) {
            Vec4 mean, sigma;
            for (int f = 0; f < kPropertyDims; ++f) {
                mean[f] = rng.uniform(spec.mean_lo[f], spec.mean_hi[f]);
                const double span = spec.mean_hi[f] - spec.mean_lo[f];
                const double pos = span > 0.0 ? (mean[f] - spec.mean_lo[f]) / span : 0.5;
                const double t = spec.sigma_mean_coupling * pos +
                                 (1.0 - spec.sigma_mean_coupling) * rng.uniform01();
                sigma[f] = spec.sigma_lo[f] + (spec.sigma_hi[f] - spec.sigma_lo[f]) * t;
            }
            bool ok = true;
            for (std::size_t j = 0; j < means.size() && ok; ++j)
                ok = class_separation(mean, sigma, means[j], sigmas[j]) >= spec.separation;
            if (ok) {
                means.push_back(mean);
                sigmas.push_back(sigma);
                placed = true;
                break;
            }
        }
        if (!placed)
            throw DataError("could not place class " + std::to_string(c + 1) +
                            " after " + std::to_string(kMaxAttemptsPerClass) +
                            " attempts; reduce separation or widen the mean ranges");
    }

    Dataset& ds = result.dataset;
    ds.class_count = spec.classes;
    ds.class_sizes.assign(spec.classes, spec.samples_per_class);
    ds.rows.reserve(static_cast<std::size_t>(spec.classes) * spec.samples_per_class);
    for (int c = 0; c < spec.classes; ++c) {
        for (int s = 0; s < spec.samples_per_class; ++s) {
            Vec4 v;
            for (int f = 0; f < kPropertyDims; ++f)
                v[f] = rng.normal(means[c][f], sigmas[c][f]);
            // Clip into the physically admissible box instead of resampling,
            // so the per-class distribution stays a (truncated) Gaussian.
            for (int f = 0; f < kPropertyDims; ++f) {
                double lo = 0.0;
                double hi = (f == 2) ? 1.0 : std::numeric_limits<double>::infinity();
                if (v[f] < lo || v[f] > hi) {
                    v[f] = std::clamp(v[f], lo, hi);
                    ++result.clipped_components;
                }
            }
            DatasetRow row;
            row.object_id = "obj" + std::to_string(c + 1) + "_" + std::to_string(s + 1);
            row.class_id = c + 1;
            row.sample = PropertySample::from_values(v);
            ds.rows.push_back(std::move(row));
        }
    }
    return result;
}

}  // namespace osrec
