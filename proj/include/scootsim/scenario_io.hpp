#pragma once

#include <string>

#include "json.hpp"
#include "scootsim/scenario.hpp"
#include "scootsim/simulation.hpp"

namespace scootsim {

// JSON schema mirrors the scenario type fields one-to-one; missing keys fall
// back to the defaults, non-finite values (e.g. an unlimited rate limit or an
// obstacle that never deactivates) are stored as null or omitted.
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::string& path);
void save_scenario(const std::string& path, const Scenario& scenario);

// Applies `key=value` to the JSON document at a dotted path, e.g.
// "fault.dropout_prob", "commands.0.v_cmd", "obstacles.1.t_off". The value is
// parsed as a JSON literal when possible, otherwise taken as a string.
void apply_override(nlohmann::json& doc, const std::string& key,
                    const std::string& value);
void apply_override_json(nlohmann::json& doc, const std::string& key,
                         const nlohmann::json& value);

nlohmann::json metrics_to_json(const RunMetrics& metrics);
void write_metrics_json(const std::string& path, const RunMetrics& metrics);

}  // namespace scootsim
