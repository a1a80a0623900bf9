#pragma once

#include <cstdint>
#include <vector>

#include "osrec/regressor.hpp"
#include "osrec/rng.hpp"
#include "osrec/types.hpp"

namespace osrec {

// Squared-form Mahalanobis distance (x-mu)^T diag(var)^-1 (x-mu), no square
// root. Cluster boundaries are compared in the same units.
double mahalanobis(const Vec4& x, const Vec4& mean, const Vec4& variance);

// Where a new cluster's parameters come from: the fitted regression model, or
// seeded uniform draws over the training envelopes (the ablation arm).
enum class ParamSource { Regression, Random };

struct ClustererOptions {
    double alpha = 0.4;
    double beta = 1.5;
    int n_gen = 40;
    int tau_update = 15;
    int tau_out = 3;
    ParamSource source = ParamSource::Regression;
};

struct Cluster {
    int id = 0;  // dense, 1-based, creation order
    Vec4 mean{};
    Vec4 variance{};
    double boundary = 0.0;  // longest Mahalanobis distance over the point set
    std::vector<Vec4> members;
    std::vector<std::int64_t> member_ids;
    std::vector<Vec4> generated;  // kept for the cluster's lifetime
    int accepted_since_update = 0;
    int updates_applied = 0;
};

// One line of the per-assignment trace, enough to replay boundary checks.
struct AssignmentRecord {
    std::int64_t sample_id = 0;
    int cluster_id = 0;
    bool created = false;
    double distance = 0.0;  // to the chosen cluster's centre
    double boundary = 0.0;  // that cluster's boundary at decision time
    std::vector<double> distances;  // to every cluster existing beforehand
};

// Online clusterer for samples already flagged novel. Single-writer: assign()
// and finalize() mutate state and must be called sequentially per stream;
// independent streams use independent states.
class ClustererState {
  public:
    ClustererState(RegressionModel model, ClustererOptions options,
                   std::uint64_t seed, int known_class_count);

    // Probability of belonging to each existing cluster, softmax of -d/2.
    std::vector<double> membership_probabilities(const PropertySample& x) const;

    // Assigns a novel sample: joins the most probable cluster when inside its
    // boundary, otherwise founds a new cluster. Ties break to the lowest id.
    Label assign(const PropertySample& x, std::int64_t sample_id);

    struct Finalization {
        std::vector<std::pair<std::int64_t, Label>> labels;
        std::vector<int> id_map;  // old id -> new id, 0 when removed
        int outlier_count = 0;
        int surviving_clusters = 0;
    };

    // Drops clusters with fewer than tau_out real members, relabelling their
    // points as outliers, and renumbers the survivors densely.
    Finalization finalize();

    const std::vector<Cluster>& clusters() const { return clusters_; }
    const std::vector<AssignmentRecord>& trace() const { return trace_; }
    int cluster_count() const { return static_cast<int>(clusters_.size()); }
    int known_class_count() const { return known_class_count_; }
    // Label id offset by the known-class count (cluster c reports as N + c),
    // the numbering used in reports and traces.
    int offset_label(int cluster_id) const { return known_class_count_ + cluster_id; }
    const ClustererOptions& options() const { return options_; }

  private:
    Cluster& create_cluster(const PropertySample& x, std::int64_t sample_id);
    void maybe_update(Cluster& cluster);

    RegressionModel model_;
    ClustererOptions options_;
    Rng rng_;
    int known_class_count_;
    bool finalized_ = false;
    std::vector<Cluster> clusters_;
    std::vector<std::pair<std::int64_t, int>> assignments_;  // sample -> cluster id
    std::vector<AssignmentRecord> trace_;
};

// Boundary recomputed from scratch over generated + member points with the
// cluster's current parameters; equals cluster.boundary by construction.
double recompute_boundary(const Cluster& cluster);

}  // namespace osrec
