#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "osrec/csv.hpp"
#include "osrec/rng.hpp"
#include "osrec/split.hpp"
#include "osrec/synth.hpp"
#include "osrec/types.hpp"

using namespace osrec;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "osrec_core_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("property sample validation") {
    PropertySample ok{1.0, 0.2, 0.5, 0.3};
    CHECK(ok.check().empty());

    PropertySample neg{-1.0, 0.2, 0.5, 0.3};
    CHECK(neg.check().find("stiffness") != std::string::npos);

    PropertySample rest{1.0, 0.2, 1.2, 0.3};
    CHECK(rest.check().find("restitution") != std::string::npos);

    PropertySample nan{1.0, std::nan(""), 0.5, 0.3};
    CHECK(nan.check().find("viscosity") != std::string::npos);

    PropertySample fric{1.0, 0.2, 0.5, -0.1};
    CHECK(fric.check().find("friction") != std::string::npos);
}

TEST_CASE("property sample round trip") {
    const PropertySample s{1.5, 0.25, 0.75, 0.4};
    const Vec4 v = s.values();
    const PropertySample back = PropertySample::from_values(v);
    CHECK(back.stiffness == s.stiffness);
    CHECK(back.viscosity == s.viscosity);
    CHECK(back.restitution == s.restitution);
    CHECK(back.friction == s.friction);
}

TEST_CASE("rng determinism and stream separation") {
    Rng a(123), b(123), c(124);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    bool differs = false;
    Rng a2(123);
    for (int i = 0; i < 100; ++i)
        if (a2.next_u64() != c.next_u64()) differs = true;
    CHECK(differs);

    CHECK(Rng::derive(5, 0) != Rng::derive(5, 1));
    CHECK(Rng::derive(5, 0) != Rng::derive(6, 0));
}

TEST_CASE("rng uniform01 bounds") {
    Rng r(9);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("rng uniform range") {
    Rng r(10);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform(-2.0, 3.0);
        CHECK(u >= -2.0);
        CHECK(u < 3.0);
    }
}

TEST_CASE("rng below is in range and deterministic") {
    Rng r(77), r2(77);
    for (int i = 0; i < 1000; ++i) {
        const auto v = r.below(13);
        CHECK(v < 13);
        CHECK(v == r2.below(13));
    }
}

TEST_CASE("rng normal moments") {
    Rng r(4242);
    const int n = 100000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("rng shuffle is a permutation") {
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[i] = i;
    auto w = v;
    Rng r(3);
    r.shuffle(w);
    CHECK(w != v);  // 50! makes identity astronomically unlikely
    std::sort(w.begin(), w.end());
    CHECK(w == v);
}

TEST_CASE("csv round trip preserves values exactly") {
    Dataset d;
    d.class_count = 2;
    d.class_sizes = {2, 2};
    d.rows = {
        {"a1", 1, {0.123456789012345, 0.2, 0.5, 0.3}},
        {"a2", 1, {1.0 / 3.0, 0.25, 0.75, 0.125}},
        {"b1", 2, {2.5, 0.0, 1.0, 0.0}},
        {"b2", 2, {3.25, 1e-9, 0.0, 2.0}},
    };
    const fs::path p = temp_file("roundtrip.csv");
    save_csv(d, p.string());
    const Dataset back = load_csv(p.string());
    REQUIRE(back.rows.size() == d.rows.size());
    CHECK(back.class_count == 2);
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        CHECK(back.rows[i].object_id == d.rows[i].object_id);
        CHECK(back.rows[i].class_id == d.rows[i].class_id);
        CHECK(back.rows[i].sample.values() == d.rows[i].sample.values());
    }
}

TEST_CASE("csv remaps class ids densely by first appearance") {
    const fs::path p = temp_file("remap.csv");
    write_file(p,
               "object_id,class_id,stiffness,viscosity,restitution,friction\n"
               "x,7,1,0.1,0.5,0.2\n"
               "y,3,2,0.1,0.5,0.2\n"
               "z,7,3,0.1,0.5,0.2\n");
    const Dataset d = load_csv(p.string());
    CHECK(d.class_count == 2);
    CHECK(d.rows[0].class_id == 1);
    CHECK(d.rows[1].class_id == 2);
    CHECK(d.rows[2].class_id == 1);
    CHECK(d.class_sizes == std::vector<int>{2, 1});
}

TEST_CASE("csv rejects malformed rows with line numbers") {
    const fs::path p = temp_file("bad_number.csv");
    write_file(p,
               "object_id,class_id,stiffness,viscosity,restitution,friction\n"
               "x,1,1,0.1,0.5,0.2\n"
               "y,1,oops,0.1,0.5,0.2\n");
    CHECK_THROWS_WITH_AS(load_csv(p.string()),
                         doctest::Contains("line 3"), DataError);

    const fs::path q = temp_file("bad_restitution.csv");
    write_file(q,
               "object_id,class_id,stiffness,viscosity,restitution,friction\n"
               "x,1,1,0.1,1.2,0.2\n");
    try {
        load_csv(q.string());
        FAIL("expected a throw");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("restitution") != std::string::npos);
    }
}

TEST_CASE("csv rejects missing header and empty data") {
    const fs::path p = temp_file("no_header.csv");
    write_file(p, "a,b,c\n1,2,3\n");
    CHECK_THROWS_AS(load_csv(p.string()), DataError);

    const fs::path q = temp_file("empty.csv");
    write_file(q, "object_id,class_id,stiffness,viscosity,restitution,friction\n");
    CHECK_THROWS_WITH_AS(load_csv(q.string()), doctest::Contains("empty"),
                         DataError);

    CHECK_THROWS_AS(load_csv("/nonexistent/nowhere.csv"), DataError);
}

TEST_CASE("synthetic generation shape and determinism") {
    SyntheticSpec spec;
    spec.classes = 20;
    spec.samples_per_class = 25;
    spec.seed = 7;
    const SyntheticResult a = generate_synthetic(spec);
    const SyntheticResult b = generate_synthetic(spec);
    CHECK(a.dataset.rows.size() == 500);
    CHECK(a.dataset.class_count == 20);
    for (int c = 0; c < 20; ++c) CHECK(a.dataset.class_sizes[c] == 25);
    REQUIRE(a.dataset.rows.size() == b.dataset.rows.size());
    for (std::size_t i = 0; i < a.dataset.rows.size(); ++i)
        CHECK(a.dataset.rows[i].sample.values() == b.dataset.rows[i].sample.values());

    spec.seed = 8;
    const SyntheticResult c = generate_synthetic(spec);
    bool differs = false;
    for (std::size_t i = 0; i < a.dataset.rows.size(); ++i)
        if (a.dataset.rows[i].sample.values() != c.dataset.rows[i].sample.values())
            differs = true;
    CHECK(differs);
}

TEST_CASE("synthetic classes respect the separation constraint") {
    SyntheticSpec spec;
    spec.classes = 12;
    spec.seed = 99;
    const SyntheticResult r = generate_synthetic(spec);
    for (int i = 0; i < spec.classes; ++i)
        for (int j = i + 1; j < spec.classes; ++j)
            CHECK(class_separation(r.class_means[i], r.class_sigmas[i],
                                   r.class_means[j], r.class_sigmas[j]) >=
                  spec.separation);
}

TEST_CASE("synthetic rows satisfy the sample invariants") {
    SyntheticSpec spec;
    spec.classes = 8;
    spec.samples_per_class = 40;
    spec.seed = 5;
    const SyntheticResult r = generate_synthetic(spec);
    for (const auto& row : r.dataset.rows) CHECK(row.sample.check().empty());
}

TEST_CASE("synthetic rejects impossible requests") {
    SyntheticSpec one;
    one.classes = 1;
    CHECK_THROWS_AS(generate_synthetic(one), DataError);

    SyntheticSpec tight;
    tight.classes = 30;
    tight.separation = 1e6;
    CHECK_THROWS_WITH_AS(generate_synthetic(tight),
                         doctest::Contains("separation"), DataError);
}

TEST_CASE("open-set split obeys the protocol") {
    SyntheticSpec spec;
    spec.classes = 20;
    spec.samples_per_class = 25;
    spec.seed = 21;
    const Dataset data = generate_synthetic(spec).dataset;
    const SplitResult s = split_open_set(data, 0.6, 0.75, 42);

    CHECK(s.known_classes.size() == 12);
    CHECK(s.novel_classes.size() == 8);
    CHECK(std::is_sorted(s.known_classes.begin(), s.known_classes.end()));
    CHECK(std::is_sorted(s.train_indices.begin(), s.train_indices.end()));

    std::set<int> known(s.known_classes.begin(), s.known_classes.end());
    std::set<int> novel(s.novel_classes.begin(), s.novel_classes.end());
    for (int k : known) CHECK(novel.count(k) == 0);

    // train and test are disjoint and cover every row exactly once
    std::set<int> train(s.train_indices.begin(), s.train_indices.end());
    std::set<int> test(s.test_indices.begin(), s.test_indices.end());
    CHECK(train.size() == s.train_indices.size());
    CHECK(test.size() == s.test_indices.size());
    for (int t : train) CHECK(test.count(t) == 0);
    CHECK(train.size() + test.size() == data.rows.size());

    // training rows come only from known classes, 18 = floor(0.75*25) each
    std::vector<int> per_class(data.class_count + 1, 0);
    for (int idx : s.train_indices) {
        const int cid = data.rows[idx].class_id;
        CHECK(known.count(cid) == 1);
        ++per_class[cid];
    }
    for (int k : known) CHECK(per_class[k] == 18);

    // every novel-class row is in the test stream
    std::size_t novel_rows = 0;
    for (const auto& row : data.rows)
        if (novel.count(row.class_id)) ++novel_rows;
    std::size_t novel_in_test = 0;
    for (int idx : s.test_indices)
        if (novel.count(data.rows[idx].class_id)) ++novel_in_test;
    CHECK(novel_rows == novel_in_test);
}

TEST_CASE("open-set split is deterministic in the seed") {
    SyntheticSpec spec;
    spec.classes = 10;
    spec.seed = 3;
    const Dataset data = generate_synthetic(spec).dataset;
    const SplitResult a = split_open_set(data, 0.6, 0.75, 1);
    const SplitResult b = split_open_set(data, 0.6, 0.75, 1);
    CHECK(a.known_classes == b.known_classes);
    CHECK(a.train_indices == b.train_indices);
    CHECK(a.test_indices == b.test_indices);

    const SplitResult c = split_open_set(data, 0.6, 0.75, 2);
    CHECK((a.known_classes != c.known_classes || a.test_indices != c.test_indices));
}

TEST_CASE("open-set split rejects degenerate fractions") {
    SyntheticSpec spec;
    spec.classes = 10;
    spec.seed = 3;
    const Dataset data = generate_synthetic(spec).dataset;
    CHECK_THROWS_AS(split_open_set(data, 0.05, 0.75, 1), DataError);
    CHECK_THROWS_AS(split_open_set(data, 1.0, 0.75, 1), DataError);
    CHECK_THROWS_AS(split_open_set(data, 0.6, 0.0, 1), DataError);
}
