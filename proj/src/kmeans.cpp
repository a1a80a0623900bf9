#include "osrec/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace osrec {
namespace {

double sq_dist(const Vec4& a, const Vec4& b) {
    double s = 0.0;
    for (int f = 0; f < kPropertyDims; ++f) {
        const double d = a[f] - b[f];
        s += d * d;
    }
    return s;
}

int nearest_centre(const Vec4& p, const std::vector<Vec4>& centres) {
    int best = 0;
    double best_d = sq_dist(p, centres[0]);
    for (std::size_t c = 1; c < centres.size(); ++c) {
        const double d = sq_dist(p, centres[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

std::vector<Vec4> init_plus_plus(std::span<const Vec4> points, int k, Rng& rng) {
    const std::size_t n = points.size();
    std::vector<Vec4> centres;
    centres.reserve(k);
    centres.push_back(points[rng.below(n)]);

    std::vector<double> d2(n);
    while (static_cast<int>(centres.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centres) best = std::min(best, sq_dist(points[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick;
        if (total > 0.0) {
            const double r = rng.uniform01() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (r < acc) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.below(n);  // all mass on existing centres: any point works
        }
        centres.push_back(points[pick]);
    }
    return centres;
}

}  // namespace

KmeansResult kmeans(std::span<const Vec4> points, int k, RngSeed seed, int jobs) {
    if (k < 1) throw ConfigError("kmeans: k must be >= 1");
    if (points.size() < static_cast<std::size_t>(k))
        throw DataError("kmeans: fewer samples than clusters requested");

    const std::size_t n = points.size();
    Rng rng(seed);
    KmeansResult res;
    res.centres = init_plus_plus(points, k, rng);
    res.labels.assign(n, 0);

    for (int iter = 0; iter < 300; ++iter) {
        res.iterations = iter + 1;
        if (jobs > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(jobs)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
                res.labels[i] = nearest_centre(points[i], res.centres);
#else
            for (std::size_t i = 0; i < n; ++i)
                res.labels[i] = nearest_centre(points[i], res.centres);
#endif
        } else {
            for (std::size_t i = 0; i < n; ++i)
                res.labels[i] = nearest_centre(points[i], res.centres);
        }

        std::vector<Vec4> sums(k, Vec4{});
        std::vector<std::int64_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (int f = 0; f < kPropertyDims; ++f)
                sums[res.labels[i]][f] += points[i][f];
            ++counts[res.labels[i]];
        }

        double max_move = 0.0;
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;  // empty cluster keeps its centre
            Vec4 next;
            for (int f = 0; f < kPropertyDims; ++f)
                next[f] = sums[c][f] / static_cast<double>(counts[c]);
            max_move = std::max(max_move, std::sqrt(sq_dist(next, res.centres[c])));
            res.centres[c] = next;
        }
        if (max_move < 1e-9) {
            res.converged = true;
            break;
        }
    }
    return res;
}

}  // namespace osrec
