#pragma once

#include <string>
#include <vector>

#include "osrec/experiment.hpp"

namespace osrec {

struct ReportOptions {
    // When false, the generated-at stamp and wall-clock runtime are left out
    // so identical runs produce byte-identical files.
    bool include_timestamp = true;
};

// Full experiment report as deterministic JSON: schema version, effective
// config, every seed, per-trial rows, aggregates, and the published
// reference values as context annotations.
std::string report_json(const ExperimentReport& report,
                        const ReportOptions& options = {});

// Mean ± std tables (detection / recognition / clustering) plus the config.
std::string report_markdown(const ExperimentReport& report);

// Plot-ready curve data, one row per swept value.
std::string sweep_csv(const SweepResult& result);

// A report read back from JSON, for merging.
struct LoadedReport {
    std::string source;  // file path it came from
    std::string arm;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<TrialResult> trials;
};

LoadedReport load_report_json(const std::string& path);

// Side-by-side aggregate table over several loaded reports.
std::string comparison_markdown(const std::vector<LoadedReport>& reports);
std::string comparison_csv(const std::vector<LoadedReport>& reports);

void save_text_file(const std::string& path, const std::string& content);

}  // namespace osrec
