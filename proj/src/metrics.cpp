#include "osrec/metrics.hpp"

#include <algorithm>
#include <map>

namespace osrec {
namespace {

std::vector<int> dense_remap(std::span<const int> labels) {
    std::map<int, int> ids;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int v : labels) {
        auto [it, fresh] = ids.emplace(v, static_cast<int>(ids.size()));
        (void)fresh;
        out.push_back(it->second);
    }
    return out;
}

std::int64_t comb2(std::int64_t n) { return n * (n - 1) / 2; }

}  // namespace

ContingencyTable ContingencyTable::from_labels(std::span<const int> a,
                                               std::span<const int> b) {
    if (a.size() != b.size())
        throw DataError("contingency table: label vectors differ in length");
    const auto ra = dense_remap(a);
    const auto rb = dense_remap(b);
    int rows = 0, cols = 0;
    for (int v : ra) rows = std::max(rows, v + 1);
    for (int v : rb) cols = std::max(cols, v + 1);

    ContingencyTable t;
    t.counts.assign(rows, std::vector<std::int64_t>(cols, 0));
    t.row_sums.assign(rows, 0);
    t.col_sums.assign(cols, 0);
    t.total = static_cast<std::int64_t>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++t.counts[ra[i]][rb[i]];
        ++t.row_sums[ra[i]];
        ++t.col_sums[rb[i]];
    }
    return t;
}

DetectionAccuracy detection_accuracy(const std::vector<bool>& decided_novel,
                                     const std::vector<bool>& truly_novel) {
    if (decided_novel.size() != truly_novel.size())
        throw DataError("detection_accuracy: length mismatch");
    if (decided_novel.empty()) throw DataError("detection_accuracy: empty input");

    std::int64_t known_total = 0, known_hit = 0;
    std::int64_t novel_total = 0, novel_hit = 0;
    for (std::size_t i = 0; i < decided_novel.size(); ++i) {
        if (truly_novel[i]) {
            ++novel_total;
            if (decided_novel[i]) ++novel_hit;
        } else {
            ++known_total;
            if (!decided_novel[i]) ++known_hit;
        }
    }
    DetectionAccuracy acc;
    acc.known = known_total ? static_cast<double>(known_hit) / known_total : 1.0;
    acc.novel = novel_total ? static_cast<double>(novel_hit) / novel_total : 1.0;
    acc.overall = static_cast<double>(known_hit + novel_hit) /
                  static_cast<double>(known_total + novel_total);
    return acc;
}

double recognition_rate(std::span<const int> predicted,
                        std::span<const int> truth) {
    if (predicted.size() != truth.size())
        throw DataError("recognition_rate: length mismatch");
    if (predicted.empty())
        throw DataError("recognition_rate: no samples decided known");
    std::int64_t hit = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i]) ++hit;
    return static_cast<double>(hit) / static_cast<double>(predicted.size());
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size())
        throw DataError("adjusted_rand_index: length mismatch");
    if (a.size() < 2)
        throw DataError("adjusted_rand_index: need at least 2 samples");

    const ContingencyTable t = ContingencyTable::from_labels(a, b);
    std::int64_t index = 0, sum_a = 0, sum_b = 0;
    for (const auto& row : t.counts)
        for (std::int64_t nij : row) index += comb2(nij);
    for (std::int64_t ai : t.row_sums) sum_a += comb2(ai);
    for (std::int64_t bj : t.col_sums) sum_b += comb2(bj);
    const std::int64_t pairs = comb2(t.total);

    // Degenerate denominator occurs exactly when both partitions are trivial
    // (all one cluster, or all singletons); defined by whether they match.
    if (sum_a == sum_b && (sum_a == 0 || sum_a == pairs))
        return dense_remap(a) == dense_remap(b) ? 1.0 : 0.0;

    const long double expected =
        static_cast<long double>(sum_a) * static_cast<long double>(sum_b) /
        static_cast<long double>(pairs);
    const long double max_index =
        (static_cast<long double>(sum_a) + static_cast<long double>(sum_b)) / 2.0L;
    return static_cast<double>((static_cast<long double>(index) - expected) /
                               (max_index - expected));
}

}  // namespace osrec
