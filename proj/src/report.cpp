#include "osrec/report.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "osrec/config.hpp"

namespace osrec {
namespace {

using ordered = nlohmann::ordered_json;

std::string iso_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string pm(const Aggregate& a) { return fmt4(a.mean) + " ± " + fmt4(a.std); }

ordered aggregate_json(const Aggregate& a) {
    return ordered{{"mean", a.mean}, {"std", a.std}};
}

ordered trial_json(int index, const TrialResult& t) {
    return ordered{{"trial", index},
                   {"seed", t.seed},
                   {"known_accuracy", t.known_accuracy},
                   {"novel_accuracy", t.novel_accuracy},
                   {"overall_accuracy", t.overall_accuracy},
                   {"recognition", t.recognition},
                   {"novel_ari", t.novel_ari},
                   {"cluster_count", t.cluster_count},
                   {"outlier_count", t.outlier_count},
                   {"ari_sample_count", t.ari_sample_count}};
}

// Fixed headline numbers measured on a physical-robot dataset that is not
// distributed; carried as context annotations only.
ordered reference_values() {
    return ordered{
        {"note",
         "reference values measured on a physical-robot dataset that is not "
         "distributed; shown for context, not reproducible here"},
        {"known_accuracy", 0.9576},
        {"novel_accuracy", 0.8921},
        {"overall_accuracy", ordered{{"mean", 0.9106}, {"std", 0.0298}}},
        {"recognition", ordered{{"mean", 0.9558}, {"std", 0.0161}}},
        {"novel_ari", ordered{{"mean", 0.701}, {"std", 0.096}}}};
}

}  // namespace

std::string report_json(const ExperimentReport& report,
                        const ReportOptions& options) {
    ordered j;
    j["schema_version"] = "1";
    if (options.include_timestamp) j["generated_at"] = iso_utc_now();
    j["arm"] = arm_name(report.config.arm);

    ordered cfg = ordered::object();
    for (const auto& [k, v] : config_items(report.config)) cfg[k] = v;
    j["config"] = cfg;

    ordered seeds;
    seeds["master"] = report.config.master_seed;
    ordered per_trial = ordered::array();
    for (const auto& t : report.trials) per_trial.push_back(t.seed);
    seeds["per_trial"] = per_trial;
    j["seeds"] = seeds;

    ordered trials = ordered::array();
    for (std::size_t i = 0; i < report.trials.size(); ++i)
        trials.push_back(trial_json(static_cast<int>(i), report.trials[i]));
    j["trials"] = trials;

    const ReportSummary s = summarize(report.trials);
    ordered agg;
    agg["known_accuracy"] = aggregate_json(s.known_accuracy);
    agg["novel_accuracy"] = aggregate_json(s.novel_accuracy);
    agg["overall_accuracy"] = aggregate_json(s.overall_accuracy);
    agg["recognition"] = aggregate_json(s.recognition);
    agg["novel_ari"] = aggregate_json(s.novel_ari);
    agg["cluster_count"] = aggregate_json(s.cluster_count);
    agg["outlier_count"] = aggregate_json(s.outlier_count);
    j["aggregate"] = agg;

    if (options.include_timestamp) j["runtime_seconds"] = report.runtime_seconds;
    j["reference_values"] = reference_values();
    return j.dump(2) + "\n";
}

std::string report_markdown(const ExperimentReport& report) {
    const ReportSummary s = summarize(report.trials);
    std::ostringstream out;
    out << "# Experiment report\n\n";
    out << "- arm: " << arm_name(report.config.arm) << "\n";
    out << "- repetitions: " << report.trials.size() << "\n";
    out << "- master seed: " << report.config.master_seed << "\n\n";

    out << "## Novelty detection accuracy\n\n";
    out << "| Known | Novel | Overall |\n| --- | --- | --- |\n";
    out << "| " << pm(s.known_accuracy) << " | " << pm(s.novel_accuracy)
        << " | " << pm(s.overall_accuracy) << " |\n\n";

    out << "## Known-class recognition\n\n";
    out << "| Recognition rate |\n| --- |\n";
    out << "| " << pm(s.recognition) << " |\n\n";

    out << "## Novel-class clustering\n\n";
    out << "| ARI | Clusters | Outliers |\n| --- | --- | --- |\n";
    out << "| " << pm(s.novel_ari) << " | " << pm(s.cluster_count) << " | "
        << pm(s.outlier_count) << " |\n\n";

    out << "## Reference values\n\n";
    out << "Measured on a physical-robot dataset (not distributed); "
           "context only.\n\n";
    out << "| Known | Novel | Overall | Recognition | ARI |\n";
    out << "| --- | --- | --- | --- | --- |\n";
    out << "| 0.9576 | 0.8921 | 0.9106 ± 0.0298 | 0.9558 ± 0.0161 | 0.701 ± "
           "0.096 |\n\n";

    out << "## Configuration\n\n";
    out << "| Key | Value |\n| --- | --- |\n";
    for (const auto& [k, v] : config_items(report.config))
        out << "| " << k << " | " << (v.empty() ? " " : v) << " |\n";
    return out.str();
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "value,mean_ari,std_ari,mean_overall_accuracy,std_overall_accuracy,"
           "mean_recognition,std_recognition,mean_cluster_count,"
           "std_cluster_count,mean_outlier_count,std_outlier_count\n";
    const auto num = [](double v) { return nlohmann::json(v).dump(); };
    for (const auto& p : result.points) {
        const ReportSummary s = summarize(p.report.trials);
        out << num(p.value) << "," << num(s.novel_ari.mean) << ","
            << num(s.novel_ari.std) << "," << num(s.overall_accuracy.mean)
            << "," << num(s.overall_accuracy.std) << ","
            << num(s.recognition.mean) << "," << num(s.recognition.std) << ","
            << num(s.cluster_count.mean) << "," << num(s.cluster_count.std)
            << "," << num(s.outlier_count.mean) << ","
            << num(s.outlier_count.std) << "\n";
    }
    return out.str();
}

LoadedReport load_report_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open report '" + path + "'");
    ordered j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("report '" + path + "': " + e.what());
    }
    if (!j.contains("schema_version") || j["schema_version"] != "1")
        throw DataError("report '" + path +
                        "': schema version mismatch (expected \"1\")");

    LoadedReport r;
    r.source = path;
    r.arm = j.value("arm", std::string("?"));
    if (j.contains("config"))
        for (const auto& [k, v] : j["config"].items())
            r.config.emplace_back(k, v.is_string() ? v.get<std::string>()
                                                   : v.dump());
    if (!j.contains("trials") || !j["trials"].is_array() ||
        j["trials"].empty())
        throw DataError("report '" + path + "': no trial rows");
    for (const auto& t : j["trials"]) {
        TrialResult tr;
        tr.seed = t.value("seed", std::uint64_t{0});
        tr.known_accuracy = t.value("known_accuracy", 0.0);
        tr.novel_accuracy = t.value("novel_accuracy", 0.0);
        tr.overall_accuracy = t.value("overall_accuracy", 0.0);
        tr.recognition = t.value("recognition", 0.0);
        tr.novel_ari = t.value("novel_ari", 0.0);
        tr.cluster_count = t.value("cluster_count", 0);
        tr.outlier_count = t.value("outlier_count", 0);
        tr.ari_sample_count = t.value("ari_sample_count", 0);
        r.trials.push_back(tr);
    }
    return r;
}

std::string comparison_markdown(const std::vector<LoadedReport>& reports) {
    if (reports.empty()) throw DataError("no reports to merge");
    std::ostringstream out;
    out << "# Report comparison\n\n";
    out << "| Source | Arm | Known | Novel | Overall | Recognition | ARI | "
           "Clusters | Outliers |\n";
    out << "| --- | --- | --- | --- | --- | --- | --- | --- | --- |\n";
    for (const auto& r : reports) {
        const ReportSummary s = summarize(r.trials);
        out << "| " << r.source << " | " << r.arm << " | "
            << pm(s.known_accuracy) << " | " << pm(s.novel_accuracy) << " | "
            << pm(s.overall_accuracy) << " | " << pm(s.recognition) << " | "
            << pm(s.novel_ari) << " | " << pm(s.cluster_count) << " | "
            << pm(s.outlier_count) << " |\n";
    }
    return out.str();
}

std::string comparison_csv(const std::vector<LoadedReport>& reports) {
    if (reports.empty()) throw DataError("no reports to merge");
    const auto num = [](double v) { return nlohmann::json(v).dump(); };
    std::ostringstream out;
    out << "source,arm,mean_known_accuracy,std_known_accuracy,"
           "mean_novel_accuracy,std_novel_accuracy,mean_overall_accuracy,"
           "std_overall_accuracy,mean_recognition,std_recognition,mean_ari,"
           "std_ari,mean_cluster_count,std_cluster_count,mean_outlier_count,"
           "std_outlier_count\n";
    for (const auto& r : reports) {
        const ReportSummary s = summarize(r.trials);
        out << r.source << "," << r.arm << "," << num(s.known_accuracy.mean)
            << "," << num(s.known_accuracy.std) << ","
            << num(s.novel_accuracy.mean) << "," << num(s.novel_accuracy.std)
            << "," << num(s.overall_accuracy.mean) << ","
            << num(s.overall_accuracy.std) << "," << num(s.recognition.mean)
            << "," << num(s.recognition.std) << "," << num(s.novel_ari.mean)
            << "," << num(s.novel_ari.std) << "," << num(s.cluster_count.mean)
            << "," << num(s.cluster_count.std) << ","
            << num(s.outlier_count.mean) << "," << num(s.outlier_count.std)
            << "\n";
    }
    return out.str();
}

void save_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
    if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace osrec
