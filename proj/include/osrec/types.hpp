#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace osrec {

using Vec4 = std::array<double, 4>;

// Thrown for malformed input data (CSV rows, invalid samples, bad splits).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown for unknown config keys, bad values, unparseable config files.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One mechanical-property measurement: stiffness, viscosity, restitution,
// friction. Restitution lives in [0,1], the rest are non-negative.
struct PropertySample {
    double stiffness = 0.0;
    double viscosity = 0.0;
    double restitution = 0.0;
    double friction = 0.0;

    Vec4 values() const { return {stiffness, viscosity, restitution, friction}; }

    static PropertySample from_values(const Vec4& v) {
        return {v[0], v[1], v[2], v[3]};
    }

    // Empty string when valid, otherwise names the offending field.
    static std::string check(double stiffness, double viscosity,
                             double restitution, double friction);
    std::string check() const {
        return check(stiffness, viscosity, restitution, friction);
    }
};

inline constexpr int kPropertyDims = 4;

inline const char* property_name(int i) {
    static const char* names[kPropertyDims] = {"stiffness", "viscosity",
                                               "restitution", "friction"};
    return names[i];
}

struct Label {
    enum class Kind { Known, NovelCluster, Outlier };
    Kind kind = Kind::Outlier;
    int id = 0;  // class id for Known, cluster id for NovelCluster

    static Label known(int class_id) { return {Kind::Known, class_id}; }
    static Label novel_cluster(int cluster_id) {
        return {Kind::NovelCluster, cluster_id};
    }
    static Label outlier() { return {Kind::Outlier, 0}; }

    bool operator==(const Label&) const = default;
};

// Classifier verdict for one test sample.
struct Decision {
    bool is_novel = false;
    int class_id = 0;  // dataset class id, valid when !is_novel

    bool operator==(const Decision&) const = default;
};

struct DatasetRow {
    std::string object_id;
    int class_id = 0;  // dense, 1-based, assigned in first-appearance order
    PropertySample sample;

    bool operator==(const DatasetRow&) const = default;
};

struct Dataset {
    std::vector<DatasetRow> rows;
    int class_count = 0;              // G
    std::vector<int> class_sizes;     // indexed by class_id - 1

    bool operator==(const Dataset&) const = default;

    std::vector<int> rows_of_class(int class_id) const {
        std::vector<int> idx;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i)
            if (rows[i].class_id == class_id) idx.push_back(i);
        return idx;
    }
};

// Open-set split: disjoint known/novel class sets, per-class train/test
// partition of the known rows, and a seeded shuffle of the test stream.
struct SplitResult {
    std::vector<int> known_classes;
    std::vector<int> novel_classes;
    std::vector<int> train_indices;  // row indices into the source dataset
    std::vector<int> test_indices;   // stream order
};

using RngSeed = std::uint64_t;

}  // namespace osrec
