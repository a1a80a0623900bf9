#include "osrec/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "osrec/rng.hpp"

namespace osrec {

SplitResult split_open_set(const Dataset& dataset, double known_fraction,
                           double train_fraction, std::uint64_t seed) {
    if (known_fraction <= 0.0 || known_fraction >= 1.0)
        throw DataError("known_fraction must be in (0,1)");
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw DataError("train_fraction must be in (0,1)");

    const int classes = dataset.class_count;
    const int known = static_cast<int>(std::lround(known_fraction * classes));
    if (known < 2)
        throw DataError("known_fraction " + std::to_string(known_fraction) +
                        " yields " + std::to_string(known) +
                        " known classes, need at least 2");
    if (known >= classes)
        throw DataError("known_fraction leaves no novel classes");

    Rng rng(seed);
    std::vector<int> ids(classes);
    std::iota(ids.begin(), ids.end(), 1);
    rng.shuffle(ids);

    SplitResult split;
    split.known_classes.assign(ids.begin(), ids.begin() + known);
    split.novel_classes.assign(ids.begin() + known, ids.end());
    std::sort(split.known_classes.begin(), split.known_classes.end());
    std::sort(split.novel_classes.begin(), split.novel_classes.end());

    std::vector<bool> is_known(classes + 1, false);
    for (int c : split.known_classes) is_known[c] = true;

    for (int c : split.known_classes) {
        auto rows = dataset.rows_of_class(c);
        rng.shuffle(rows);
        const int train_count =
            static_cast<int>(std::floor(train_fraction * static_cast<double>(rows.size())));
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i < train_count)
                split.train_indices.push_back(rows[i]);
            else
                split.test_indices.push_back(rows[i]);
        }
    }
    for (int i = 0; i < static_cast<int>(dataset.rows.size()); ++i)
        if (!is_known[dataset.rows[i].class_id]) split.test_indices.push_back(i);

    rng.shuffle(split.test_indices);
    std::sort(split.train_indices.begin(), split.train_indices.end());
    return split;
}

}  // namespace osrec
