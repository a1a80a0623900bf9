#include <cmath>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "osrec/metrics.hpp"
#include "osrec/rng.hpp"

using namespace osrec;

TEST_CASE("contingency table cross-tabulates with consistent sums") {
    const std::vector<int> a{0, 0, 0, 1, 1, 1};
    const std::vector<int> b{0, 0, 1, 1, 2, 2};
    const ContingencyTable t = ContingencyTable::from_labels(a, b);
    REQUIRE(t.counts.size() == 2);
    REQUIRE(t.counts[0].size() == 3);
    CHECK(t.counts[0] == std::vector<std::int64_t>{2, 1, 0});
    CHECK(t.counts[1] == std::vector<std::int64_t>{0, 1, 2});
    CHECK(t.row_sums == std::vector<std::int64_t>{3, 3});
    CHECK(t.col_sums == std::vector<std::int64_t>{2, 2, 2});
    CHECK(t.total == 6);

    std::int64_t sum = 0;
    for (const auto& row : t.counts)
        for (auto v : row) sum += v;
    CHECK(sum == t.total);

    const std::vector<int> short_b{0, 1};
    CHECK_THROWS_AS(ContingencyTable::from_labels(a, short_b), DataError);
}

TEST_CASE("detection accuracy counts both sides") {
    // 4 known samples, 3 decided known; 6 novel samples, 3 decided novel
    const std::vector<bool> truly{false, false, false, false, true, true,
                                  true,  true,  true,  true};
    const std::vector<bool> decided{false, false, false, true, true, true,
                                    true,  false, false, false};
    const DetectionAccuracy acc = detection_accuracy(decided, truly);
    CHECK(acc.known == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(acc.novel == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(acc.overall == doctest::Approx(0.6).epsilon(1e-15));

    const std::vector<bool> perfect_truth{false, true};
    const std::vector<bool> perfect_decided{false, true};
    const DetectionAccuracy all = detection_accuracy(perfect_decided, perfect_truth);
    CHECK(all.known == 1.0);
    CHECK(all.novel == 1.0);
    CHECK(all.overall == 1.0);

    CHECK_THROWS_AS(detection_accuracy({}, {}), DataError);
    const std::vector<bool> lone{true};
    CHECK_THROWS_AS(detection_accuracy(lone, std::vector<bool>{}), DataError);
}

TEST_CASE("recognition rate is the exact-match fraction") {
    std::vector<int> pred(20), truth(20);
    for (int i = 0; i < 20; ++i) pred[i] = truth[i] = i % 5;
    CHECK(recognition_rate(pred, truth) == 1.0);
    pred[7] = 99;
    CHECK(recognition_rate(pred, truth) == doctest::Approx(0.95).epsilon(1e-15));
    CHECK_THROWS_AS(recognition_rate({}, {}), DataError);
}

TEST_CASE("ari basics") {
    const std::vector<int> a{0, 0, 1, 1};
    CHECK(adjusted_rand_index(a, a) == 1.0);
    const std::vector<int> flipped{1, 1, 0, 0};
    CHECK(adjusted_rand_index(a, flipped) == 1.0);

    const std::vector<int> t{0, 0, 0, 1, 1, 1};
    const std::vector<int> p{0, 0, 1, 1, 2, 2};
    const double v = adjusted_rand_index(t, p);
    CHECK(v == doctest::Approx(24.0 / 99.0).epsilon(1e-15));
    CHECK(v == doctest::Approx(oracle::pair_counting_ari(t, p)).epsilon(1e-14));
    CHECK(adjusted_rand_index(p, t) == v);  // symmetric

    // relabelling either side changes nothing
    const std::vector<int> relabelled{5, 5, 9, 9, 7, 7};
    CHECK(adjusted_rand_index(t, relabelled) ==
          adjusted_rand_index(t, std::vector<int>{0, 0, 1, 1, 2, 2}));

    CHECK_THROWS_AS(adjusted_rand_index(std::vector<int>{1}, std::vector<int>{1}),
                    DataError);
    CHECK_THROWS_AS(adjusted_rand_index(t, a), DataError);
}

TEST_CASE("ari degenerate partitions follow the documented convention") {
    const std::vector<int> ones{3, 3, 3, 3};
    CHECK(adjusted_rand_index(ones, std::vector<int>{7, 7, 7, 7}) == 1.0);

    const std::vector<int> singles{0, 1, 2, 3};
    CHECK(adjusted_rand_index(singles, std::vector<int>{9, 8, 7, 6}) == 1.0);

    // one trivial side only: regular formula applies, chance level
    CHECK(adjusted_rand_index(ones, singles) == 0.0);
    CHECK(adjusted_rand_index(singles, ones) == 0.0);
}

TEST_CASE("ari equals the pair-counting oracle on random instances") {
    Rng r(321);
    for (int it = 0; it < 300; ++it) {
        const int n = 2 + static_cast<int>(r.below(11));
        std::vector<int> a(n), b(n);
        const int ka = 1 + static_cast<int>(r.below(4));
        const int kb = 1 + static_cast<int>(r.below(4));
        for (int i = 0; i < n; ++i) {
            a[i] = static_cast<int>(r.below(ka));
            b[i] = static_cast<int>(r.below(kb));
        }
        const double mine = adjusted_rand_index(a, b);
        const double ref = oracle::pair_counting_ari(a, b);
        CHECK(std::abs(mine - ref) <= 1e-12);
    }
}

TEST_CASE("ari stays exact on mid-sized inputs") {
    Rng r(654);
    const int n = 2000;
    std::vector<int> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = static_cast<int>(r.below(7));
        b[i] = static_cast<int>(r.below(5));
    }
    CHECK(std::abs(adjusted_rand_index(a, b) - oracle::pair_counting_ari(a, b)) <=
          1e-12);
}

TEST_CASE("ari of independent labelings is chance-corrected to zero") {
    Rng r(987);
    const int n = 1000, k = 5;
    double sum = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<int> a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = static_cast<int>(r.below(k));
            b[i] = static_cast<int>(r.below(k));
        }
        sum += adjusted_rand_index(a, b);
    }
    CHECK(std::abs(sum / 100.0) < 0.05);
}

TEST_CASE("ari is at most one") {
    Rng r(13);
    for (int it = 0; it < 50; ++it) {
        const int n = 3 + static_cast<int>(r.below(20));
        std::vector<int> a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = static_cast<int>(r.below(3));
            b[i] = static_cast<int>(r.below(3));
        }
        CHECK(adjusted_rand_index(a, b) <= 1.0);
        CHECK(adjusted_rand_index(a, a) == 1.0);
    }
}
