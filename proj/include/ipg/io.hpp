#pragma once

#include "ipg/bench.hpp"
#include "ipg/scenarios.hpp"
#include "ipg/sim.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ipg {

// Shortest representation that parses back to the identical double.
std::string format_double(double value);
double parse_double(const std::string& text);

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

// Applies the optional "sim" and "solver" objects of a scenario file on top
// of `base`. Command-line flags are applied after this, so flags win.
SimConfig sim_config_from_json(const std::string& text, SimConfig base);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

// Trace CSV: header then one row per state; columns are step, t, and per
// agent (px, py, theta, v, a, w). The final row carries zero controls.
std::string trace_to_csv(const SimTrace& trace, double ts);

struct ParsedTrace {
  std::vector<JointState> states;
  std::vector<std::vector<ControlInput>> controls;
};
ParsedTrace trace_from_csv(const std::string& text);

// Plans JSONL: one record per (step, ego) with each agent's planned states.
std::string plans_to_jsonl(const SimTrace& trace, double ts);
std::vector<std::vector<AgentDecision>> plans_from_jsonl(const std::string& text);

// Rebuilds the SimTrace recorded in `dir` (states and controls from the
// CSV, decisions from the JSONL, outcome re-derived).
SimTrace load_run(const std::filesystem::path& dir, const Scenario& scenario,
                  const SimConfig& cfg);

// Summary JSON: outcome, timings, and the effective configuration.
std::string summary_to_json(const SimTrace& trace, const Scenario& scenario,
                            const std::vector<PolicyKind>& assignment, const SimConfig& cfg);

// Writes trace.csv, plans.jsonl, summary.json, and scenario.json to `dir`.
void write_run_outputs(const std::filesystem::path& dir, const Scenario& scenario,
                       const std::vector<PolicyKind>& assignment, const SimConfig& cfg,
                       const SimTrace& trace);

// Writes report.txt and report_rows.jsonl to `dir`.
void write_suite_outputs(const std::filesystem::path& dir, const SuiteReport& report);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace ipg
