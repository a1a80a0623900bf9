#pragma once

#include <span>
#include <vector>

#include "osrec/rng.hpp"
#include "osrec/types.hpp"

namespace osrec {

struct KmeansResult {
    std::vector<int> labels;  // 0-based cluster per point
    std::vector<Vec4> centres;
    int iterations = 0;
    bool converged = false;
};

// Lloyd's algorithm with seeded k-means++ initialisation. Stops when the
// largest centre movement drops below 1e-9 or after 300 iterations. Empty
// clusters keep their previous centre. jobs > 1 parallelises the assignment
// step; results are identical to the serial path.
KmeansResult kmeans(std::span<const Vec4> points, int k, RngSeed seed,
                    int jobs = 1);

}  // namespace osrec
