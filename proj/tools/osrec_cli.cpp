#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "osrec/config.hpp"
#include "osrec/csv.hpp"
#include "osrec/report.hpp"
#include "osrec/synth.hpp"

namespace fs = std::filesystem;
using namespace osrec;

namespace {

std::string default_out_dir() {
    const char* env = std::getenv("OSREC_OUT_DIR");
    return env && *env ? env : ".";
}

// Accepts "a,b,c", "lo..hi" (step 0.1) and "lo..hi:step", mixed via commas.
std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string token = text.substr(start, comma - start);
        start = comma + 1;
        if (token.empty()) continue;

        const std::size_t dots = token.find("..");
        if (dots == std::string::npos) {
            try {
                std::size_t used = 0;
                const double v = std::stod(token, &used);
                if (used != token.size()) throw std::invalid_argument(token);
                out.push_back(v);
            } catch (const std::exception&) {
                throw ConfigError("--values: '" + token + "' is not a number");
            }
            continue;
        }

        const std::string lo_s = token.substr(0, dots);
        std::string hi_s = token.substr(dots + 2);
        double step = 0.1;
        if (const std::size_t colon = hi_s.find(':');
            colon != std::string::npos) {
            try {
                step = std::stod(hi_s.substr(colon + 1));
            } catch (const std::exception&) {
                throw ConfigError("--values: bad step in '" + token + "'");
            }
            hi_s = hi_s.substr(0, colon);
        }
        double lo, hi;
        try {
            lo = std::stod(lo_s);
            hi = std::stod(hi_s);
        } catch (const std::exception&) {
            throw ConfigError("--values: bad range '" + token + "'");
        }
        if (step <= 0.0) throw ConfigError("--values: step must be positive");
        if (hi < lo) throw ConfigError("--values: range '" + token + "' is empty");
        const int count = static_cast<int>((hi - lo) / step + 1e-9) + 1;
        for (int i = 0; i < count; ++i) out.push_back(lo + i * step);
    }
    if (out.empty()) throw ConfigError("--values: no values given");
    return out;
}

ExperimentConfig make_config(const std::string& config_path,
                             const std::vector<std::string>& overrides) {
    ExperimentConfig cfg =
        config_path.empty() ? default_config() : load_config(config_path);
    for (const auto& o : overrides) apply_override(cfg, o);
    return cfg;
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void print_summary(const ExperimentReport& report) {
    const ReportSummary s = summarize(report.trials);
    std::cout << "arm " << arm_name(report.config.arm) << ", "
              << report.trials.size() << " trials\n"
              << "  detection known/novel/overall  " << fmt4(s.known_accuracy.mean)
              << " / " << fmt4(s.novel_accuracy.mean) << " / "
              << fmt4(s.overall_accuracy.mean) << "\n"
              << "  recognition " << fmt4(s.recognition.mean) << "  ari "
              << fmt4(s.novel_ari.mean) << " +- " << fmt4(s.novel_ari.std)
              << "  clusters " << fmt4(s.cluster_count.mean) << "\n";
}

int do_generate(const std::string& config_path,
                const std::vector<std::string>& overrides,
                const std::string& out_path) {
    const ExperimentConfig cfg = make_config(config_path, overrides);
    const SyntheticResult res = generate_synthetic(cfg.synth);
    if (const fs::path dir = fs::path(out_path).parent_path(); !dir.empty())
        fs::create_directories(dir);
    save_csv(res.dataset, out_path);

    std::cout << "class  rows  mean (stiffness viscosity restitution friction)\n";
    for (int c = 0; c < res.dataset.class_count; ++c) {
        std::cout << "  " << (c + 1) << "  " << res.dataset.class_sizes[c]
                  << "  ";
        for (int f = 0; f < kPropertyDims; ++f)
            std::cout << fmt4(res.class_means[c][f])
                      << (f + 1 < kPropertyDims ? " " : "\n");
    }
    std::cout << res.dataset.rows.size() << " rows, "
              << res.clipped_components << " clipped components -> " << out_path
              << "\n";
    return 0;
}

int do_run(const std::string& config_path,
           const std::vector<std::string>& overrides,
           const std::string& out_dir, int jobs, bool no_timestamp) {
    const ExperimentConfig cfg = make_config(config_path, overrides);
    const Dataset data = load_or_generate(cfg);
    const ExperimentReport report = run_experiment(data, cfg, jobs);

    const ReportOptions opts{!no_timestamp};
    fs::create_directories(out_dir);
    const std::string json_path = out_dir + "/report.json";
    const std::string md_path = out_dir + "/report.md";
    save_text_file(json_path, report_json(report, opts));
    save_text_file(md_path, report_markdown(report));

    print_summary(report);
    std::cout << "wrote " << json_path << "\nwrote " << md_path << "\n";
    return 0;
}

int do_sweep(const std::string& config_path,
             const std::vector<std::string>& overrides,
             const std::string& out_dir, const std::string& param,
             const std::string& values_text, int jobs, bool no_timestamp) {
    const ExperimentConfig cfg = make_config(config_path, overrides);
    const std::vector<double> values = parse_values(values_text);
    const Dataset data = load_or_generate(cfg);
    const SweepResult result = sweep(data, cfg, param, values, jobs);

    fs::create_directories(out_dir);
    const ReportOptions opts{!no_timestamp};
    const std::string csv_path = out_dir + "/sweep_" + param + ".csv";
    save_text_file(csv_path, sweep_csv(result));
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const std::string path = out_dir + "/sweep_" + param + "_" +
                                 std::to_string(i) + ".json";
        save_text_file(path, report_json(result.points[i].report, opts));
    }

    for (const auto& p : result.points) {
        const ReportSummary s = summarize(p.report.trials);
        std::cout << param << " = " << p.value << "  ari "
                  << fmt4(s.novel_ari.mean) << " +- " << fmt4(s.novel_ari.std)
                  << "\n";
    }
    std::cout << "wrote " << csv_path << " and " << result.points.size()
              << " per-value reports\n";
    return 0;
}

int do_report(const std::vector<std::string>& inputs,
              const std::string& format, const std::string& out_path) {
    if (format != "markdown" && format != "csv")
        throw ConfigError("--format must be markdown or csv");
    std::vector<LoadedReport> reports;
    reports.reserve(inputs.size());
    for (const auto& p : inputs) reports.push_back(load_report_json(p));
    const std::string text = format == "markdown"
                                 ? comparison_markdown(reports)
                                 : comparison_csv(reports);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        if (const fs::path dir = fs::path(out_path).parent_path(); !dir.empty())
            fs::create_directories(dir);
        save_text_file(out_path, text);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"open-set recognition over 4-d mechanical-property features"};
    app.require_subcommand(1);

    std::string config_path, out_dir = default_out_dir();
    std::vector<std::string> overrides;
    int jobs = 1;
    bool no_timestamp = false;

    auto* gen = app.add_subcommand("generate", "write a synthetic dataset CSV");
    std::string gen_out = default_out_dir() + "/dataset.csv";
    gen->add_option("-c,--config", config_path, "config file (key = value, or .json)");
    gen->add_option("-s,--set", overrides, "override, key=value (repeatable)");
    gen->add_option("-o,--out", gen_out, "output CSV path");

    auto* run = app.add_subcommand("run", "run the full experiment protocol");
    run->add_option("-c,--config", config_path, "config file (key = value, or .json)");
    run->add_option("-s,--set", overrides, "override, key=value (repeatable)");
    run->add_option("-o,--out-dir", out_dir, "output directory");
    run->add_option("-j,--jobs", jobs, "parallel trials (default 1)");
    run->add_flag("--no-timestamp", no_timestamp,
                  "omit timestamp and runtime for byte-stable output");

    auto* swp = app.add_subcommand("sweep", "run one experiment per parameter value");
    std::string param, values_text;
    swp->add_option("-c,--config", config_path, "config file (key = value, or .json)");
    swp->add_option("-s,--set", overrides, "override, key=value (repeatable)");
    swp->add_option("-o,--out-dir", out_dir, "output directory");
    swp->add_option("-j,--jobs", jobs, "parallel trials (default 1)");
    swp->add_option("--param", param, "alpha | beta | n_gen | tau_update | novel_fraction")
        ->required();
    swp->add_option("--values", values_text, "comma list and/or lo..hi[:step] ranges")
        ->required();
    swp->add_flag("--no-timestamp", no_timestamp,
                  "omit timestamp and runtime for byte-stable output");

    auto* rep = app.add_subcommand("report", "merge report JSONs into one table");
    std::vector<std::string> inputs;
    std::string format = "markdown", rep_out;
    rep->add_option("inputs", inputs, "report JSON files")->required();
    rep->add_option("-f,--format", format, "markdown | csv");
    rep->add_option("-o,--out", rep_out, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return do_generate(config_path, overrides, gen_out);
        if (run->parsed())
            return do_run(config_path, overrides, out_dir, jobs, no_timestamp);
        if (swp->parsed())
            return do_sweep(config_path, overrides, out_dir, param, values_text,
                            jobs, no_timestamp);
        if (rep->parsed()) return do_report(inputs, format, rep_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
