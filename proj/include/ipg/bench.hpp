#pragma once

#include "ipg/sim.hpp"

#include <string>
#include <vector>

namespace ipg {

// One benchmarked policy assignment; `kinds` is broadcast when it holds a
// single entry for a multi-agent scenario.
struct Assignment {
  std::string label;
  std::vector<PolicyKind> kinds;

  std::vector<PolicyKind> for_agents(int n) const;
};

struct CaseResult {
  OutcomeKind outcome = OutcomeKind::Deadlock;
  double total_time_s = 0.0;
};

struct PolicyRow {
  std::string label;
  int success = 0;
  int deadlock = 0;
  int collision = 0;
  double average_extra_time_s = 0.0;  // over joint-success cases
  int extra_time_cases = 0;
};

struct SuiteReport {
  int n_cases = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<CaseResult>> results;  // [policy][case]
  std::vector<CaseResult> baseline;              // centralized, per case
  std::vector<int> excluded_cases;               // baseline failures

  PolicyRow row(int policy) const;
  double extra_time(int policy, int case_index) const;  // distributed - baseline
};

// Runs every assignment plus the centralized baseline on each case with the
// same configuration. Cases run independently (optionally in parallel);
// aggregation is by case index, so the report does not depend on scheduling.
SuiteReport run_suite(const std::vector<Scenario>& suite,
                      const std::vector<Assignment>& assignments, const SimConfig& cfg,
                      int jobs = 0);

// Fixed-width text table: success rate, deadlock and collision counts, and
// signed average extra time versus the centralized baseline.
std::string report_table(const SuiteReport& report);

// Machine-readable per-case rows (JSON lines).
std::string report_rows_jsonl(const SuiteReport& report);

}  // namespace ipg
