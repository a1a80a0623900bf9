#include "osrec/config.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace osrec {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double out;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + v + "' is not a number");
    }
    if (used != v.size()) throw ConfigError(key + ": '" + v + "' is not a number");
    return out;
}

long long to_int(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long long out;
    try {
        out = std::stoll(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + v + "' is not an integer");
    }
    if (used != v.size())
        throw ConfigError(key + ": '" + v + "' is not an integer");
    return out;
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    std::uint64_t out;
    try {
        out = std::stoull(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + v + "' is not a valid seed");
    }
    if (used != v.size())
        throw ConfigError(key + ": '" + v + "' is not a valid seed");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ConfigError(key + ": '" + v + "' is not a boolean (use true/false)");
}

Vec4 to_vec4(const std::string& key, const std::string& v) {
    Vec4 out{};
    std::stringstream ss(v);
    std::string part;
    int i = 0;
    while (std::getline(ss, part, ',')) {
        if (i >= kPropertyDims)
            throw ConfigError(key + ": expected 4 comma-separated numbers");
        out[i++] = to_double(key, trim(part));
    }
    if (i != kPropertyDims)
        throw ConfigError(key + ": expected 4 comma-separated numbers");
    return out;
}

// Shortest round-trip decimal form, shared with the JSON report writer.
std::string num(double v) { return nlohmann::json(v).dump(); }

std::string vec(const Vec4& v) {
    std::string s;
    for (int f = 0; f < kPropertyDims; ++f) {
        if (f) s += ",";
        s += num(v[f]);
    }
    return s;
}

struct KeyEntry {
    const char* name;
    const char* doc;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<KeyEntry>& registry() {
    static const std::vector<KeyEntry> keys = {
        {"csv_path", "dataset CSV path; empty switches to the synthetic source",
         [](ExperimentConfig& c, const std::string& v) { c.csv_path = v; },
         [](const ExperimentConfig& c) { return c.csv_path; }},
        {"classes", "synthetic class count",
         [](ExperimentConfig& c, const std::string& v) {
             c.synth.classes = static_cast<int>(to_int("classes", v));
         },
         [](const ExperimentConfig& c) { return std::to_string(c.synth.classes); }},
        {"samples_per_class", "synthetic rows per class",
         [](ExperimentConfig& c, const std::string& v) {
             c.synth.samples_per_class =
                 static_cast<int>(to_int("samples_per_class", v));
         },
         [](const ExperimentConfig& c) {
             return std::to_string(c.synth.samples_per_class);
         }},
        {"separation", "min pairwise class-mean distance in sigma units",
         [](ExperimentConfig& c, const std::string& v) {
             c.synth.separation = to_double("separation", v);
         },
         [](const ExperimentConfig& c) { return num(c.synth.separation); }},
        {"sigma_mean_coupling", "0..1, ties class sigma to mean position",
         [](ExperimentConfig& c, const std::string& v) {
             c.synth.sigma_mean_coupling = to_double("sigma_mean_coupling", v);
         },
         [](const ExperimentConfig& c) { return num(c.synth.sigma_mean_coupling); }},
        {"data_seed", "seed for synthetic generation",
         [](ExperimentConfig& c, const std::string& v) {
             c.synth.seed = to_seed("data_seed", v);
         },
         [](const ExperimentConfig& c) { return std::to_string(c.synth.seed); }},
        {"mean_lo", "per-feature lower bounds for class means (4 numbers)",
         [](ExperimentConfig& c, const std::string& v) {
             c.synth.mean_lo = to_vec4("mean_lo", v);
         },
         [](const ExperimentConfig& c) { return vec(c.synth.mean_lo); }},
        {"mean_hi", "per-feature upper bounds for class means (4 numbers)",
         [](ExperimentConfig& c, const std::string& v) {
             c.synth.mean_hi = to_vec4("mean_hi", v);
         },
         [](const ExperimentConfig& c) { return vec(c.synth.mean_hi); }},
        {"sigma_lo", "per-feature lower bounds for class sigmas (4 numbers)",
         [](ExperimentConfig& c, const std::string& v) {
             c.synth.sigma_lo = to_vec4("sigma_lo", v);
         },
         [](const ExperimentConfig& c) { return vec(c.synth.sigma_lo); }},
        {"sigma_hi", "per-feature upper bounds for class sigmas (4 numbers)",
         [](ExperimentConfig& c, const std::string& v) {
             c.synth.sigma_hi = to_vec4("sigma_hi", v);
         },
         [](const ExperimentConfig& c) { return vec(c.synth.sigma_hi); }},
        {"known_fraction", "fraction of classes treated as known",
         [](ExperimentConfig& c, const std::string& v) {
             c.known_fraction = to_double("known_fraction", v);
         },
         [](const ExperimentConfig& c) { return num(c.known_fraction); }},
        {"train_fraction", "fraction of each known class used for training",
         [](ExperimentConfig& c, const std::string& v) {
             c.train_fraction = to_double("train_fraction", v);
         },
         [](const ExperimentConfig& c) { return num(c.train_fraction); }},
        {"repetitions", "number of seeded repetitions",
         [](ExperimentConfig& c, const std::string& v) {
             c.repetitions = static_cast<int>(to_int("repetitions", v));
         },
         [](const ExperimentConfig& c) { return std::to_string(c.repetitions); }},
        {"master_seed", "seed all per-trial seeds derive from",
         [](ExperimentConfig& c, const std::string& v) {
             c.master_seed = to_seed("master_seed", v);
         },
         [](const ExperimentConfig& c) { return std::to_string(c.master_seed); }},
        {"arm", "full | random_params | kmeans_baseline",
         [](ExperimentConfig& c, const std::string& v) { c.arm = parse_arm(v); },
         [](const ExperimentConfig& c) { return arm_name(c.arm); }},
        {"novelty_quantile", "training log-likelihood quantile for the threshold",
         [](ExperimentConfig& c, const std::string& v) {
             c.hyper.novelty_quantile = to_double("novelty_quantile", v);
         },
         [](const ExperimentConfig& c) { return num(c.hyper.novelty_quantile); }},
        {"alpha", "new-cluster centre pull towards the triggering sample",
         [](ExperimentConfig& c, const std::string& v) {
             c.hyper.alpha = to_double("alpha", v);
         },
         [](const ExperimentConfig& c) { return num(c.hyper.alpha); }},
        {"beta", "scale on the predicted cluster variance",
         [](ExperimentConfig& c, const std::string& v) {
             c.hyper.beta = to_double("beta", v);
         },
         [](const ExperimentConfig& c) { return num(c.hyper.beta); }},
        {"n_gen", "generated points per new cluster",
         [](ExperimentConfig& c, const std::string& v) {
             c.hyper.n_gen = static_cast<int>(to_int("n_gen", v));
         },
         [](const ExperimentConfig& c) { return std::to_string(c.hyper.n_gen); }},
        {"tau_update", "accepted members between parameter refreshes",
         [](ExperimentConfig& c, const std::string& v) {
             c.hyper.tau_update = static_cast<int>(to_int("tau_update", v));
         },
         [](const ExperimentConfig& c) {
             return std::to_string(c.hyper.tau_update);
         }},
        {"tau_out", "min final member count for a cluster to survive",
         [](ExperimentConfig& c, const std::string& v) {
             c.hyper.tau_out = static_cast<int>(to_int("tau_out", v));
         },
         [](const ExperimentConfig& c) { return std::to_string(c.hyper.tau_out); }},
        {"lambda_mean", "ridge strength for the mean regression",
         [](ExperimentConfig& c, const std::string& v) {
             c.hyper.lambda_mean = to_double("lambda_mean", v);
         },
         [](const ExperimentConfig& c) { return num(c.hyper.lambda_mean); }},
        {"lambda_var", "ridge strength for the variance regression",
         [](ExperimentConfig& c, const std::string& v) {
             c.hyper.lambda_var = to_double("lambda_var", v);
         },
         [](const ExperimentConfig& c) { return num(c.hyper.lambda_var); }},
        {"standardize_features", "z-score the 14-dim features before the solve",
         [](ExperimentConfig& c, const std::string& v) {
             c.hyper.standardize_features = to_bool("standardize_features", v);
         },
         [](const ExperimentConfig& c) {
             return c.hyper.standardize_features ? std::string("true")
                                                 : std::string("false");
         }},
        {"count_outliers_as_singletons",
         "score removed points as singleton clusters",
         [](ExperimentConfig& c, const std::string& v) {
             c.count_outliers_as_singletons =
                 to_bool("count_outliers_as_singletons", v);
         },
         [](const ExperimentConfig& c) {
             return c.count_outliers_as_singletons ? std::string("true")
                                                   : std::string("false");
         }},
        {"include_misrouted_in_ari",
         "score misrouted known samples as one shared error class",
         [](ExperimentConfig& c, const std::string& v) {
             c.include_misrouted_in_ari = to_bool("include_misrouted_in_ari", v);
         },
         [](const ExperimentConfig& c) {
             return c.include_misrouted_in_ari ? std::string("true")
                                               : std::string("false");
         }},
    };
    return keys;
}

std::string valid_keys() {
    std::string s;
    for (const auto& k : registry()) {
        if (!s.empty()) s += ", ";
        s += k.name;
    }
    return s;
}

void set_key(ExperimentConfig& config, const std::string& key,
             const std::string& value, const std::string& where) {
    for (const auto& k : registry()) {
        if (key == k.name) {
            k.set(config, value);
            return;
        }
    }
    throw ConfigError(where + "unknown key '" + key +
                      "': valid keys are " + valid_keys());
}

}  // namespace

ExperimentConfig default_config() { return ExperimentConfig{}; }

std::vector<std::pair<std::string, std::string>> config_key_reference() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : registry()) out.emplace_back(k.name, k.doc);
    return out;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config = default_config();
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (eq == std::string::npos)
            throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + "missing key before '='");
        try {
            set_key(config, key, value, where);
        } catch (const ConfigError& e) {
            std::string msg = e.what();
            if (msg.rfind(where, 0) == 0) throw;
            throw ConfigError(where + msg);
        }
    }
    return config;
}

ExperimentConfig parse_config_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config JSON must be a flat object of settings");

    ExperimentConfig config = default_config();
    for (const auto& [key, value] : j.items()) {
        std::string v;
        if (value.is_string()) {
            v = value.get<std::string>();
        } else if (value.is_boolean()) {
            v = value.get<bool>() ? "true" : "false";
        } else if (value.is_number()) {
            v = value.dump();
        } else if (value.is_array()) {
            for (const auto& part : value) {
                if (!v.empty()) v += ",";
                v += part.is_string() ? part.get<std::string>() : part.dump();
            }
        } else {
            throw ConfigError("config JSON: unsupported value for key '" + key +
                              "'");
        }
        set_key(config, key, v, "");
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const bool json = path.size() >= 5 &&
                      path.compare(path.size() - 5, 5, ".json") == 0;
    return json ? parse_config_json(buf.str()) : parse_config_text(buf.str());
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (key.empty())
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    set_key(config, key, value, "");
}

std::vector<std::pair<std::string, std::string>> config_items(
    const ExperimentConfig& config) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : registry()) out.emplace_back(k.name, k.get(config));
    return out;
}

}  // namespace osrec
