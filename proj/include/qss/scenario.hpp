#pragma once

#include <optional>
#include <string>

#include "qss/analysis.hpp"
#include "qss/protocol.hpp"

namespace qss {

/// A fully resolved simulation request: a valid (config, table, attack)
/// triple plus output paths. Resolution fails before any simulation runs.
struct Scenario {
    std::string name = "scenario";
    ProtocolConfig config;
    AttackStrategy attack;
    std::string table_ref = "parity";  // built-in name or JSON file path
    EncodingTable table;
    std::string out_path;      // transcript JSON ("" = skip)
    std::string metrics_path;  // metrics JSON ("" = skip)
    std::string csv_path;      // per-round CSV ("" = skip)
    int threads = 1;
};

// Parses the JSON scenario document (same keys as the CLI flags) and
// validates it, including protocol/attack compatibility. Throws
// std::invalid_argument with a usable message on any problem.
Scenario scenario_from_json(const std::string& json_text);

// Re-checks a scenario assembled from flags; resolves the table reference.
void finish_scenario(Scenario& scenario);

struct ScenarioResult {
    Transcript transcript;
    std::string metrics_json;   // pretty metrics document
    std::string summary_text;   // short terminal summary
};

ScenarioResult run_scenario(const Scenario& scenario);

// flag-value parsers shared by the CLI and the JSON loader
ProtocolKind protocol_from_string(const std::string& s);
AttackStrategy attack_from_string(const std::string& s);
std::string attack_to_cli_string(const AttackStrategy& a);

}  // namespace qss
