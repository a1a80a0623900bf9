// Timings for the parallel lanes against their serial reference paths, with
// an equality check on every output. Speedups approach 1x on single-core
// machines; the identical column is the part that must never change.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "osrec/classifier.hpp"
#include "osrec/experiment.hpp"
#include "osrec/kmeans.hpp"
#include "osrec/rng.hpp"
#include "osrec/split.hpp"
#include "osrec/synth.hpp"

using namespace osrec;
using clock_type = std::chrono::steady_clock;

template <typename F>
static double best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = clock_type::now();
        fn();
        const double ms =
            std::chrono::duration<double, std::milli>(clock_type::now() - t0)
                .count();
        if (ms < best) best = ms;
    }
    return best;
}

static void row(const char* name, double serial_ms, double parallel_ms,
                bool identical) {
    std::printf("%-18s %10.2f ms %10.2f ms %7.2fx   %s\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms,
                identical ? "identical" : "DIFFERS");
}

int main(int argc, char** argv) {
    int jobs = 4;
#ifdef _OPENMP
    jobs = omp_get_max_threads();
#endif
    if (argc > 1) jobs = std::atoi(argv[1]);
    if (jobs < 2) jobs = 2;  // still exercises the parallel code path

    SyntheticSpec spec;
    spec.classes = 24;
    spec.samples_per_class = 120;
    spec.seed = 99;
    const Dataset data = generate_synthetic(spec).dataset;

    std::printf("dataset: %zu rows, %d classes, %d jobs\n\n", data.rows.size(),
                data.class_count, jobs);
    std::printf("%-18s %13s %13s %8s\n", "kernel", "serial", "parallel",
                "speedup");

    // classify_batch over the full test stream
    const SplitResult split = split_open_set(data, 0.6, 0.75, 7);
    ClassifierModel model = fit_classifier(data, split.train_indices);
    model.novelty_threshold =
        calibrate_threshold(model, data, split.train_indices, 0.01);
    model.threshold_set = true;

    std::vector<Decision> serial_dec, parallel_dec;
    const double c_serial = best_of(
        3, [&] { serial_dec = classify_batch(model, data, split.test_indices, 1); });
    const double c_parallel = best_of(3, [&] {
        parallel_dec = classify_batch(model, data, split.test_indices, jobs);
    });
    bool same = serial_dec.size() == parallel_dec.size();
    for (std::size_t i = 0; same && i < serial_dec.size(); ++i)
        same = serial_dec[i].is_novel == parallel_dec[i].is_novel &&
               serial_dec[i].class_id == parallel_dec[i].class_id;
    row("classify_batch", c_serial, c_parallel, same);

    // k-means assignment step
    std::vector<Vec4> points;
    points.reserve(data.rows.size());
    for (const auto& r : data.rows) points.push_back(r.sample.values());
    KmeansResult km_serial, km_parallel;
    const double k_serial =
        best_of(3, [&] { km_serial = kmeans(points, 12, 42, 1); });
    const double k_parallel =
        best_of(3, [&] { km_parallel = kmeans(points, 12, 42, jobs); });
    row("kmeans", k_serial, k_parallel,
        km_serial.labels == km_parallel.labels &&
            km_serial.iterations == km_parallel.iterations);

    // whole-trial loop
    ExperimentConfig cfg;
    cfg.synth = spec;
    cfg.repetitions = 8;
    cfg.master_seed = 11;
    ExperimentReport rep_serial, rep_parallel;
    const double t_serial =
        best_of(1, [&] { rep_serial = run_experiment(data, cfg, 1); });
    const double t_parallel =
        best_of(1, [&] { rep_parallel = run_experiment(data, cfg, jobs); });
    same = rep_serial.trials.size() == rep_parallel.trials.size();
    for (std::size_t i = 0; same && i < rep_serial.trials.size(); ++i) {
        const TrialResult &a = rep_serial.trials[i], &b = rep_parallel.trials[i];
        same = a.seed == b.seed && a.known_accuracy == b.known_accuracy &&
               a.novel_accuracy == b.novel_accuracy &&
               a.overall_accuracy == b.overall_accuracy &&
               a.recognition == b.recognition && a.novel_ari == b.novel_ari &&
               a.cluster_count == b.cluster_count &&
               a.outlier_count == b.outlier_count;
    }
    row("trial loop", t_serial, t_parallel, same);
    return 0;
}
