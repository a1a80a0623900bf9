#include "osrec/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <unordered_set>

#include "osrec/classifier.hpp"
#include "osrec/clusterer.hpp"
#include "osrec/csv.hpp"
#include "osrec/kmeans.hpp"
#include "osrec/regressor.hpp"
#include "osrec/rng.hpp"
#include "osrec/split.hpp"

namespace osrec {
namespace {

void validate_config(const ExperimentConfig& config) {
    if (config.repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (!(config.known_fraction > 0.0 && config.known_fraction < 1.0))
        throw ConfigError("known_fraction must be in (0,1)");
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
        throw ConfigError("train_fraction must be in (0,1)");
    const Hyperparams& h = config.hyper;
    if (!(h.novelty_quantile >= 0.0 && h.novelty_quantile < 0.5))
        throw ConfigError("novelty_quantile must be in [0, 0.5)");
    if (h.alpha < 0.0 || h.alpha > 1.0) throw ConfigError("alpha must be in [0,1]");
    if (h.beta < 0.0) throw ConfigError("beta must be >= 0");
    if (h.n_gen < 0) throw ConfigError("n_gen must be >= 0");
    if (h.tau_update < 1) throw ConfigError("tau_update must be >= 1");
    if (h.tau_out < 0) throw ConfigError("tau_out must be >= 0");
    if (h.lambda_mean < 0.0 || h.lambda_var < 0.0)
        throw ConfigError("regularisation lambdas must be >= 0");
}

int as_int_value(double v, const char* name) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || r < 0.0)
        throw ConfigError(std::string(name) + " sweep values must be non-negative integers");
    return static_cast<int>(r);
}

}  // namespace

std::string arm_name(Arm arm) {
    switch (arm) {
        case Arm::Full: return "full";
        case Arm::RandomParams: return "random_params";
        case Arm::KmeansBaseline: return "kmeans_baseline";
    }
    throw ConfigError("unknown arm value");
}

Arm parse_arm(const std::string& name) {
    if (name == "full") return Arm::Full;
    if (name == "random_params") return Arm::RandomParams;
    if (name == "kmeans_baseline") return Arm::KmeansBaseline;
    throw ConfigError("unknown arm '" + name +
                      "': valid arms are full, random_params, kmeans_baseline");
}

Aggregate aggregate(std::span<const double> values) {
    if (values.empty()) throw DataError("aggregate: empty value list");
    Aggregate a;
    for (double v : values) a.mean += v;
    a.mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        const double d = v - a.mean;
        ss += d * d;
    }
    a.std = std::sqrt(ss / static_cast<double>(values.size()));
    return a;
}

ReportSummary summarize(const std::vector<TrialResult>& trials) {
    if (trials.empty()) throw DataError("summarize: no trials");
    const auto pull = [&](auto member) {
        std::vector<double> v;
        v.reserve(trials.size());
        for (const auto& t : trials) v.push_back(static_cast<double>(t.*member));
        return aggregate(v);
    };
    ReportSummary s;
    s.known_accuracy = pull(&TrialResult::known_accuracy);
    s.novel_accuracy = pull(&TrialResult::novel_accuracy);
    s.overall_accuracy = pull(&TrialResult::overall_accuracy);
    s.recognition = pull(&TrialResult::recognition);
    s.novel_ari = pull(&TrialResult::novel_ari);
    s.cluster_count = pull(&TrialResult::cluster_count);
    s.outlier_count = pull(&TrialResult::outlier_count);
    return s;
}

Dataset load_or_generate(const ExperimentConfig& config) {
    if (!config.csv_path.empty()) return load_csv(config.csv_path);
    return generate_synthetic(config.synth).dataset;
}

TrialResult run_trial(const Dataset& dataset, const ExperimentConfig& config,
                      RngSeed trial_seed) {
    validate_config(config);
    const SplitResult split =
        split_open_set(dataset, config.known_fraction, config.train_fraction,
                       Rng::derive(trial_seed, 0));

    ClassifierModel model = fit_classifier(dataset, split.train_indices);
    model.novelty_threshold = calibrate_threshold(
        model, dataset, split.train_indices, config.hyper.novelty_quantile);
    model.threshold_set = true;

    const std::vector<Decision> decisions =
        classify_batch(model, dataset, split.test_indices, 1);

    const std::unordered_set<int> novel_set(split.novel_classes.begin(),
                                            split.novel_classes.end());
    const int n_test = static_cast<int>(split.test_indices.size());
    std::vector<bool> decided_novel(n_test), truly_novel(n_test);
    for (int pos = 0; pos < n_test; ++pos) {
        decided_novel[pos] = decisions[pos].is_novel;
        truly_novel[pos] =
            novel_set.count(dataset.rows[split.test_indices[pos]].class_id) > 0;
    }

    TrialResult tr;
    tr.seed = trial_seed;

    // Cluster the novel-decided stream. final_cluster: 0 none, -1 outlier,
    // positive = cluster id.
    std::vector<int> final_cluster(n_test, 0);
    if (config.arm == Arm::KmeansBaseline) {
        std::vector<Vec4> routed;
        std::vector<int> routed_pos;
        for (int pos = 0; pos < n_test; ++pos) {
            if (!decided_novel[pos]) continue;
            routed.push_back(dataset.rows[split.test_indices[pos]].sample.values());
            routed_pos.push_back(pos);
        }
        // The offline baseline is handed the true novel class count; the
        // online arms never see it.
        const int k = static_cast<int>(split.novel_classes.size());
        if (!routed.empty()) {
            const KmeansResult km =
                kmeans(routed, k, Rng::derive(trial_seed, 2), 1);
            for (std::size_t j = 0; j < routed.size(); ++j)
                final_cluster[routed_pos[j]] = km.labels[j] + 1;
            tr.cluster_count = k;
        }
    } else {
        RegressionModel reg = fit_regression(
            dataset, split.train_indices, config.hyper.lambda_mean,
            config.hyper.lambda_var, config.hyper.standardize_features);
        ClustererOptions opts;
        opts.alpha = config.hyper.alpha;
        opts.beta = config.hyper.beta;
        opts.n_gen = config.hyper.n_gen;
        opts.tau_update = config.hyper.tau_update;
        opts.tau_out = config.hyper.tau_out;
        opts.source = config.arm == Arm::RandomParams ? ParamSource::Random
                                                      : ParamSource::Regression;
        ClustererState clusterer(std::move(reg), opts, Rng::derive(trial_seed, 1),
                                 model.class_count);
        for (int pos = 0; pos < n_test; ++pos) {
            if (!decided_novel[pos]) continue;
            clusterer.assign(dataset.rows[split.test_indices[pos]].sample, pos);
        }
        const auto fin = clusterer.finalize();
        for (const auto& [pos, label] : fin.labels)
            final_cluster[pos] =
                label.kind == Label::Kind::Outlier ? -1 : label.id;
        tr.cluster_count = fin.surviving_clusters;
        tr.outlier_count = fin.outlier_count;
    }

    const DetectionAccuracy acc = detection_accuracy(decided_novel, truly_novel);
    tr.known_accuracy = acc.known;
    tr.novel_accuracy = acc.novel;
    tr.overall_accuracy = acc.overall;

    std::vector<int> rec_pred, rec_true;
    for (int pos = 0; pos < n_test; ++pos) {
        if (decided_novel[pos] || truly_novel[pos]) continue;
        rec_pred.push_back(decisions[pos].class_id);
        rec_true.push_back(dataset.rows[split.test_indices[pos]].class_id);
    }
    tr.recognition = rec_pred.empty() ? 0.0 : recognition_rate(rec_pred, rec_true);

    // Clustering score over samples that are truly novel AND decided novel;
    // the flags widen the set (misrouted knowns as one shared error class,
    // outliers as singleton clusters).
    std::vector<int> ari_true, ari_pred;
    int singleton_id = -2;  // -1 is reserved for the shared misroute class
    for (int pos = 0; pos < n_test; ++pos) {
        if (!decided_novel[pos]) continue;
        const bool misrouted = !truly_novel[pos];
        if (misrouted && !config.include_misrouted_in_ari) continue;
        const int pred = final_cluster[pos];
        if (pred == 0) continue;
        if (pred == -1 && !config.count_outliers_as_singletons) continue;
        ari_true.push_back(misrouted
                               ? -1
                               : dataset.rows[split.test_indices[pos]].class_id);
        ari_pred.push_back(pred == -1 ? singleton_id-- : pred);
    }
    tr.ari_sample_count = static_cast<int>(ari_true.size());
    tr.novel_ari =
        ari_true.size() >= 2 ? adjusted_rand_index(ari_true, ari_pred) : 0.0;
    return tr;
}

ExperimentReport run_experiment(const Dataset& dataset,
                                const ExperimentConfig& config, int jobs) {
    validate_config(config);
    ExperimentReport report;
    report.config = config;
    report.trials.resize(config.repetitions);

    const auto t0 = std::chrono::steady_clock::now();
    int failed_trial = -1;
    std::string failure;

    bool parallel = jobs > 1;
#ifndef _OPENMP
    parallel = false;
#endif
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (int t = 0; t < config.repetitions; ++t) {
            try {
                report.trials[t] =
                    run_trial(dataset, config, Rng::derive(config.master_seed, t));
            } catch (const std::exception& e) {
#pragma omp critical
                if (failed_trial < 0 || t < failed_trial) {
                    failed_trial = t;
                    failure = e.what();
                }
            }
        }
#endif
    } else {
        for (int t = 0; t < config.repetitions; ++t) {
            try {
                report.trials[t] =
                    run_trial(dataset, config, Rng::derive(config.master_seed, t));
            } catch (const std::exception& e) {
                throw DataError("trial " + std::to_string(t) +
                                " failed: " + e.what());
            }
        }
    }
    if (failed_trial >= 0)
        throw DataError("trial " + std::to_string(failed_trial) +
                        " failed: " + failure);

    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return report;
}

SweepResult sweep(const Dataset& dataset, const ExperimentConfig& config,
                  const std::string& parameter, std::span<const double> values,
                  int jobs) {
    const bool known =
        std::any_of(std::begin(kSweepParameters), std::end(kSweepParameters),
                    [&](const char* p) { return parameter == p; });
    if (!known) {
        std::string msg = "unknown sweep parameter '" + parameter +
                          "': valid names are ";
        for (std::size_t i = 0; i < std::size(kSweepParameters); ++i) {
            if (i) msg += ", ";
            msg += kSweepParameters[i];
        }
        throw ConfigError(msg);
    }
    if (values.empty()) throw ConfigError("sweep: no values given");

    SweepResult out;
    out.parameter = parameter;
    for (double v : values) {
        ExperimentConfig c = config;
        if (parameter == "alpha") {
            c.hyper.alpha = v;
        } else if (parameter == "beta") {
            c.hyper.beta = v;
        } else if (parameter == "n_gen") {
            c.hyper.n_gen = as_int_value(v, "n_gen");
        } else if (parameter == "tau_update") {
            c.hyper.tau_update = as_int_value(v, "tau_update");
        } else {  // novel_fraction
            if (!(v > 0.0 && v < 1.0))
                throw ConfigError("novel_fraction sweep values must be in (0,1)");
            c.known_fraction = 1.0 - v;
        }
        out.points.push_back({v, run_experiment(dataset, c, jobs)});
    }
    return out;
}

}  // namespace osrec
