#include "osrec/clusterer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "osrec/classifier.hpp"

namespace osrec {

double mahalanobis(const Vec4& x, const Vec4& mean, const Vec4& variance) {
    double sum = 0.0;
    for (int f = 0; f < kPropertyDims; ++f) {
        if (!(variance[f] > 0.0))
            throw DataError(std::string("mahalanobis: non-positive variance in ") +
                            property_name(f));
        const double d = x[f] - mean[f];
        sum += d * d / variance[f];
    }
    return sum;
}

double recompute_boundary(const Cluster& cluster) {
    double best = 0.0;
    for (const auto& p : cluster.generated)
        best = std::max(best, mahalanobis(p, cluster.mean, cluster.variance));
    for (const auto& p : cluster.members)
        best = std::max(best, mahalanobis(p, cluster.mean, cluster.variance));
    return best;
}

ClustererState::ClustererState(RegressionModel model, ClustererOptions options,
                               std::uint64_t seed, int known_class_count)
    : model_(std::move(model)),
      options_(options),
      rng_(seed),
      known_class_count_(known_class_count) {
    if (options_.alpha < 0.0 || options_.alpha > 1.0)
        throw ConfigError("alpha must be in [0,1]");
    if (options_.beta < 0.0) throw ConfigError("beta must be >= 0");
    if (options_.n_gen < 0) throw ConfigError("n_gen must be >= 0");
    if (options_.tau_update < 1) throw ConfigError("tau_update must be >= 1");
    if (options_.tau_out < 0) throw ConfigError("tau_out must be >= 0");
}

std::vector<double> ClustererState::membership_probabilities(
    const PropertySample& x) const {
    if (clusters_.empty())
        throw DataError("membership_probabilities: no clusters exist yet");
    const Vec4 v = x.values();
    std::vector<double> p(clusters_.size());
    double min_d = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < clusters_.size(); ++u) {
        p[u] = mahalanobis(v, clusters_[u].mean, clusters_[u].variance);
        min_d = std::min(min_d, p[u]);
    }
    double total = 0.0;
    for (double& d : p) {
        d = std::exp(-0.5 * (d - min_d));
        total += d;
    }
    for (double& d : p) d /= total;
    note_probability_vector(p);
    return p;
}

Cluster& ClustererState::create_cluster(const PropertySample& x,
                                        std::int64_t sample_id) {
    ClusterParams params;
    if (options_.source == ParamSource::Regression) {
        params = predict_cluster_params(model_, x, options_.alpha, options_.beta);
    } else {
        // Ablation: the regression prediction is replaced by uniform draws
        // over the training envelopes; everything downstream is unchanged.
        const Vec4 v = x.values();
        for (int f = 0; f < kPropertyDims; ++f) {
            const double centre = rng_.uniform(model_.sample_lo[f], model_.sample_hi[f]);
            const double var = rng_.uniform(model_.class_var_lo[f], model_.class_var_hi[f]);
            params.mean[f] = (1.0 - options_.alpha) * centre + options_.alpha * v[f];
            params.variance[f] =
                std::max(options_.beta * var, model_.variance_floor[f]);
        }
    }

    Cluster cluster;
    cluster.id = static_cast<int>(clusters_.size()) + 1;
    cluster.mean = params.mean;
    cluster.variance = params.variance;
    cluster.generated.reserve(options_.n_gen);
    for (int i = 0; i < options_.n_gen; ++i) {
        Vec4 p;
        for (int f = 0; f < kPropertyDims; ++f)
            p[f] = rng_.normal(params.mean[f], std::sqrt(params.variance[f]));
        cluster.generated.push_back(p);
    }
    cluster.members.push_back(x.values());
    cluster.member_ids.push_back(sample_id);
    cluster.boundary = recompute_boundary(cluster);
    clusters_.push_back(std::move(cluster));
    return clusters_.back();
}

void ClustererState::maybe_update(Cluster& cluster) {
    if (cluster.accepted_since_update < options_.tau_update) return;

    const std::size_t total = cluster.generated.size() + cluster.members.size();
    if (total >= 2) {
        Vec4 mean{}, m2{};
        for (const auto& p : cluster.generated)
            for (int f = 0; f < kPropertyDims; ++f) mean[f] += p[f];
        for (const auto& p : cluster.members)
            for (int f = 0; f < kPropertyDims; ++f) mean[f] += p[f];
        for (int f = 0; f < kPropertyDims; ++f)
            mean[f] /= static_cast<double>(total);
        for (const auto& p : cluster.generated)
            for (int f = 0; f < kPropertyDims; ++f) {
                const double d = p[f] - mean[f];
                m2[f] += d * d;
            }
        for (const auto& p : cluster.members)
            for (int f = 0; f < kPropertyDims; ++f) {
                const double d = p[f] - mean[f];
                m2[f] += d * d;
            }
        cluster.mean = mean;
        for (int f = 0; f < kPropertyDims; ++f)
            cluster.variance[f] = std::max(m2[f] / static_cast<double>(total - 1),
                                           model_.variance_floor[f]);
    }
    cluster.boundary = recompute_boundary(cluster);
    cluster.accepted_since_update = 0;
    ++cluster.updates_applied;
}

Label ClustererState::assign(const PropertySample& x, std::int64_t sample_id) {
    if (finalized_) throw DataError("assign called after finalize");

    if (clusters_.empty()) {
        Cluster& c = create_cluster(x, sample_id);
        assignments_.emplace_back(sample_id, c.id);
        trace_.push_back({sample_id, c.id, true,
                          mahalanobis(x.values(), c.mean, c.variance), c.boundary,
                          {}});
        return Label::novel_cluster(c.id);
    }

    const auto probs = membership_probabilities(x);
    std::vector<double> dists(clusters_.size());
    for (std::size_t u = 0; u < clusters_.size(); ++u)
        dists[u] = mahalanobis(x.values(), clusters_[u].mean, clusters_[u].variance);

    const int best = static_cast<int>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    Cluster& chosen = clusters_[best];
    const double d = dists[best];

    if (d <= chosen.boundary) {
        chosen.members.push_back(x.values());
        chosen.member_ids.push_back(sample_id);
        ++chosen.accepted_since_update;
        assignments_.emplace_back(sample_id, chosen.id);
        trace_.push_back({sample_id, chosen.id, false, d, chosen.boundary, dists});
        maybe_update(chosen);
        return Label::novel_cluster(chosen.id);
    }

    Cluster& fresh = create_cluster(x, sample_id);
    assignments_.emplace_back(sample_id, fresh.id);
    trace_.push_back({sample_id, fresh.id, true,
                      mahalanobis(x.values(), fresh.mean, fresh.variance),
                      fresh.boundary, dists});
    return Label::novel_cluster(fresh.id);
}

ClustererState::Finalization ClustererState::finalize() {
    if (finalized_) throw DataError("finalize called twice");
    finalized_ = true;

    Finalization out;
    out.id_map.assign(clusters_.size() + 1, 0);
    int next_id = 0;
    for (const auto& c : clusters_)
        if (static_cast<int>(c.members.size()) >= options_.tau_out)
            out.id_map[c.id] = ++next_id;
    out.surviving_clusters = next_id;

    std::vector<Cluster> kept;
    kept.reserve(next_id);
    for (auto& c : clusters_) {
        if (out.id_map[c.id] == 0) continue;
        c.id = out.id_map[c.id];
        kept.push_back(std::move(c));
    }
    clusters_ = std::move(kept);

    out.labels.reserve(assignments_.size());
    for (const auto& [sample_id, old_id] : assignments_) {
        const int new_id = out.id_map[old_id];
        if (new_id == 0) {
            out.labels.emplace_back(sample_id, Label::outlier());
            ++out.outlier_count;
        } else {
            out.labels.emplace_back(sample_id, Label::novel_cluster(new_id));
        }
    }
    return out;
}

}  // namespace osrec
