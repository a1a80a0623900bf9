#pragma once

#include <span>
#include <string>
#include <vector>

#include "osrec/metrics.hpp"
#include "osrec/synth.hpp"
#include "osrec/types.hpp"

namespace osrec {

// full = regression-driven clustering; random_params swaps the regression
// prediction for uniform draws (ablation); kmeans_baseline replaces the
// online clusterer with seeded k-means given the true novel class count.
enum class Arm { Full, RandomParams, KmeansBaseline };

std::string arm_name(Arm arm);
Arm parse_arm(const std::string& name);

struct Hyperparams {
    double novelty_quantile = 0.01;  // q for the log-likelihood threshold
    double alpha = 0.4;
    double beta = 1.5;
    int n_gen = 40;
    int tau_update = 15;
    int tau_out = 3;
    // Ridge strengths; heavier on the means, where extrapolation to novel
    // classes otherwise rides on noise-fitted quadratic terms.
    double lambda_mean = 1.0;
    double lambda_var = 0.3;
    bool standardize_features = false;
};

struct ExperimentConfig {
    std::string csv_path;  // when empty the synthetic spec is the data source
    SyntheticSpec synth;
    double known_fraction = 0.6;
    double train_fraction = 0.75;
    int repetitions = 25;
    Hyperparams hyper;
    RngSeed master_seed = 1;
    Arm arm = Arm::Full;
    // Scoring-boundary flags for the clustering score; see metrics.
    bool count_outliers_as_singletons = false;
    bool include_misrouted_in_ari = false;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<TrialResult> trials;
    double runtime_seconds = 0.0;
};

struct Aggregate {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
};

Aggregate aggregate(std::span<const double> values);

struct ReportSummary {
    Aggregate known_accuracy, novel_accuracy, overall_accuracy;
    Aggregate recognition, novel_ari, cluster_count, outlier_count;
};

ReportSummary summarize(const std::vector<TrialResult>& trials);

Dataset load_or_generate(const ExperimentConfig& config);

// One repetition: split, fit, calibrate, stream the test set, finalize,
// score. Deterministic in (dataset, config, trial_seed).
TrialResult run_trial(const Dataset& dataset, const ExperimentConfig& config,
                      RngSeed trial_seed);

// Runs config.repetitions trials with per-trial seeds derived from the
// master seed. jobs > 1 distributes trials across OpenMP threads; the
// report is identical to a sequential run.
ExperimentReport run_experiment(const Dataset& dataset,
                                const ExperimentConfig& config, int jobs = 1);

struct SweepPoint {
    double value = 0.0;
    ExperimentReport report;
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepPoint> points;
};

inline constexpr const char* kSweepParameters[] = {
    "alpha", "beta", "n_gen", "tau_update", "novel_fraction"};

// One full experiment per value, all sharing the master seed so trials are
// paired across values. novel_fraction maps to known_fraction = 1 - value.
SweepResult sweep(const Dataset& dataset, const ExperimentConfig& config,
                  const std::string& parameter, std::span<const double> values,
                  int jobs = 1);

}  // namespace osrec
