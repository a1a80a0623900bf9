#include <algorithm>
#include <cmath>
#include <filesystem>
#include <vector>

#include <doctest.h>

#include "osrec/csv.hpp"
#include "osrec/experiment.hpp"
#include "osrec/rng.hpp"

using namespace osrec;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.synth.classes = 8;
    c.synth.samples_per_class = 16;
    c.synth.seed = 500;
    c.repetitions = 3;
    c.master_seed = 42;
    return c;
}

bool same_trial(const TrialResult& a, const TrialResult& b) {
    return a.seed == b.seed && a.known_accuracy == b.known_accuracy &&
           a.novel_accuracy == b.novel_accuracy &&
           a.overall_accuracy == b.overall_accuracy &&
           a.recognition == b.recognition && a.novel_ari == b.novel_ari &&
           a.cluster_count == b.cluster_count &&
           a.outlier_count == b.outlier_count &&
           a.ari_sample_count == b.ari_sample_count;
}

}  // namespace

TEST_CASE("arm names round trip and bad ones are listed") {
    for (Arm a : {Arm::Full, Arm::RandomParams, Arm::KmeansBaseline})
        CHECK(parse_arm(arm_name(a)) == a);
    CHECK_THROWS_WITH_AS(parse_arm("dbscan"), doctest::Contains("full"),
                         ConfigError);
}

TEST_CASE("aggregate computes population statistics") {
    const std::vector<double> v{1.0, 2.0, 3.0};
    const Aggregate a = aggregate(v);
    CHECK(a.mean == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(a.std == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(aggregate({}), DataError);

    const std::vector<double> single{4.5};
    const Aggregate s = aggregate(single);
    CHECK(s.mean == 4.5);
    CHECK(s.std == 0.0);
}

TEST_CASE("trials are deterministic in (config, seed)") {
    const ExperimentConfig cfg = small_config();
    const Dataset data = load_or_generate(cfg);
    const TrialResult a = run_trial(data, cfg, 987);
    const TrialResult b = run_trial(data, cfg, 987);
    CHECK(same_trial(a, b));
    const TrialResult c = run_trial(data, cfg, 988);
    CHECK_FALSE(same_trial(a, c));
}

TEST_CASE("run_experiment derives per-trial seeds from the master seed") {
    const ExperimentConfig cfg = small_config();
    const Dataset data = load_or_generate(cfg);
    const ExperimentReport rep = run_experiment(data, cfg);
    REQUIRE(rep.trials.size() == 3);
    for (int t = 0; t < 3; ++t)
        CHECK(rep.trials[t].seed == Rng::derive(cfg.master_seed, t));

    // each trial row equals an independent run with that seed
    for (const auto& tr : rep.trials)
        CHECK(same_trial(tr, run_trial(data, cfg, tr.seed)));
}

TEST_CASE("single repetition aggregates to itself with zero spread") {
    ExperimentConfig cfg = small_config();
    cfg.repetitions = 1;
    const Dataset data = load_or_generate(cfg);
    const ExperimentReport rep = run_experiment(data, cfg);
    const ReportSummary s = summarize(rep.trials);
    CHECK(s.novel_ari.mean == rep.trials[0].novel_ari);
    CHECK(s.novel_ari.std == 0.0);
    CHECK(s.overall_accuracy.mean == rep.trials[0].overall_accuracy);
}

TEST_CASE("aggregates are insensitive to trial order") {
    const ExperimentConfig cfg = small_config();
    const Dataset data = load_or_generate(cfg);
    ExperimentReport rep = run_experiment(data, cfg);
    const ReportSummary before = summarize(rep.trials);
    std::reverse(rep.trials.begin(), rep.trials.end());
    const ReportSummary after = summarize(rep.trials);
    // summation order changes only the last-bit rounding
    CHECK(before.novel_ari.mean ==
          doctest::Approx(after.novel_ari.mean).epsilon(1e-14));
    CHECK(before.novel_ari.std ==
          doctest::Approx(after.novel_ari.std).epsilon(1e-14));
    CHECK(before.overall_accuracy.mean ==
          doctest::Approx(after.overall_accuracy.mean).epsilon(1e-14));
}

TEST_CASE("kmeans baseline arm uses the true novel class count") {
    ExperimentConfig cfg = small_config();
    cfg.arm = Arm::KmeansBaseline;
    cfg.synth.classes = 10;
    const Dataset data = load_or_generate(cfg);
    const TrialResult tr = run_trial(data, cfg, 3);
    // round(0.6 * 10) known -> 4 novel classes
    CHECK(tr.cluster_count == 4);
    CHECK(tr.outlier_count == 0);
    CHECK(tr.ari_sample_count > 0);
}

TEST_CASE("random arm runs and stays deterministic") {
    ExperimentConfig cfg = small_config();
    cfg.arm = Arm::RandomParams;
    const Dataset data = load_or_generate(cfg);
    const TrialResult a = run_trial(data, cfg, 55);
    const TrialResult b = run_trial(data, cfg, 55);
    CHECK(same_trial(a, b));
    CHECK(a.novel_ari <= 1.0);
}

TEST_CASE("sweep pairs seeds across values") {
    const ExperimentConfig cfg = small_config();
    const Dataset data = load_or_generate(cfg);
    const std::vector<double> alphas{0.0, 0.4};
    const SweepResult sr = sweep(data, cfg, "alpha", alphas);
    REQUIRE(sr.points.size() == 2);
    for (std::size_t t = 0; t < sr.points[0].report.trials.size(); ++t)
        CHECK(sr.points[0].report.trials[t].seed ==
              sr.points[1].report.trials[t].seed);
    CHECK(sr.points[0].report.config.hyper.alpha == 0.0);
    CHECK(sr.points[1].report.config.hyper.alpha == 0.4);
}

TEST_CASE("novel_fraction sweep adjusts the known fraction") {
    const ExperimentConfig cfg = small_config();
    const Dataset data = load_or_generate(cfg);
    const std::vector<double> fracs{0.25, 0.5};
    const SweepResult sr = sweep(data, cfg, "novel_fraction", fracs);
    CHECK(sr.points[0].report.config.known_fraction ==
          doctest::Approx(0.75).epsilon(1e-15));
    CHECK(sr.points[1].report.config.known_fraction ==
          doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sweep rejects unknown parameters listing the valid ones") {
    const ExperimentConfig cfg = small_config();
    const Dataset data = load_or_generate(cfg);
    CHECK_THROWS_WITH_AS(sweep(data, cfg, "gamma", std::vector<double>{1.0}),
                         doctest::Contains("novel_fraction"), ConfigError);
    CHECK_THROWS_AS(sweep(data, cfg, "alpha", std::vector<double>{}),
                    ConfigError);
    CHECK_THROWS_AS(sweep(data, cfg, "n_gen", std::vector<double>{2.5}),
                    ConfigError);
}

TEST_CASE("config validation rejects bad settings up front") {
    const Dataset data = load_or_generate(small_config());

    ExperimentConfig bad = small_config();
    bad.repetitions = 0;
    CHECK_THROWS_AS(run_experiment(data, bad), ConfigError);

    bad = small_config();
    bad.known_fraction = 1.5;
    CHECK_THROWS_AS(run_trial(data, bad, 1), ConfigError);

    bad = small_config();
    bad.hyper.novelty_quantile = 0.5;
    CHECK_THROWS_AS(run_trial(data, bad, 1), ConfigError);

    bad = small_config();
    bad.hyper.alpha = -0.2;
    CHECK_THROWS_AS(run_trial(data, bad, 1), ConfigError);

    bad = small_config();
    bad.hyper.tau_update = 0;
    CHECK_THROWS_AS(run_trial(data, bad, 1), ConfigError);
}

TEST_CASE("trial failures carry the trial index") {
    ExperimentConfig cfg = small_config();
    cfg.synth.classes = 4;
    cfg.known_fraction = 0.26;  // rounds to 1 known class: split fails
    const Dataset data = load_or_generate(cfg);
    CHECK_THROWS_WITH_AS(run_experiment(data, cfg), doctest::Contains("trial 0"),
                         DataError);
}

TEST_CASE("load_or_generate reads csv sources") {
    const ExperimentConfig synth_cfg = small_config();
    const Dataset d = load_or_generate(synth_cfg);

    const fs::path dir = fs::temp_directory_path() / "osrec_experiment_tests";
    fs::create_directories(dir);
    const fs::path p = dir / "source.csv";
    save_csv(d, p.string());

    ExperimentConfig csv_cfg = small_config();
    csv_cfg.csv_path = p.string();
    const Dataset back = load_or_generate(csv_cfg);
    REQUIRE(back.rows.size() == d.rows.size());
    CHECK(back.class_count == d.class_count);
    for (std::size_t i = 0; i < d.rows.size(); ++i)
        CHECK(back.rows[i].sample.values() == d.rows[i].sample.values());
}

TEST_CASE("trial metrics stay inside their ranges") {
    // train/test disjointness itself is covered by the split tests
    const ExperimentConfig cfg = small_config();
    const Dataset data = load_or_generate(cfg);
    const TrialResult tr = run_trial(data, cfg, 12);
    CHECK(tr.known_accuracy >= 0.0);
    CHECK(tr.known_accuracy <= 1.0);
    CHECK(tr.novel_accuracy >= 0.0);
    CHECK(tr.novel_accuracy <= 1.0);
    CHECK(tr.overall_accuracy >= 0.0);
    CHECK(tr.overall_accuracy <= 1.0);
    CHECK(tr.novel_ari >= -1.0);
    CHECK(tr.novel_ari <= 1.0);
}
