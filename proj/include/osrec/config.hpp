#pragma once

#include <string>
#include <utility>
#include <vector>

#include "osrec/experiment.hpp"

namespace osrec {

// Experiment settings as a flat key list. The text format is one
// `key = value` per line with `#` comments; a `.json` path is instead read
// as a flat JSON object over the same keys. Unknown keys are rejected.

ExperimentConfig default_config();

// All recognised keys with one-line docs, in canonical order.
std::vector<std::pair<std::string, std::string>> config_key_reference();

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// `--set key=value` override on top of a parsed config.
void apply_override(ExperimentConfig& config, const std::string& assignment);

// Effective settings as canonical strings, in key-reference order; embedded
// in every report so artifacts are reproducible from their own header.
std::vector<std::pair<std::string, std::string>> config_items(
    const ExperimentConfig& config);

}  // namespace osrec
