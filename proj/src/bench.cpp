#include "ipg/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ipg {

std::vector<PolicyKind> Assignment::for_agents(int n) const {
  if (static_cast<int>(kinds.size()) == n) return kinds;
  if (kinds.size() == 1) return std::vector<PolicyKind>(static_cast<size_t>(n), kinds[0]);
  throw std::invalid_argument("assignment size does not match agent count");
}

PolicyRow SuiteReport::row(int policy) const {
  PolicyRow r;
  r.label = labels[static_cast<size_t>(policy)];
  double extra_sum = 0.0;
  for (int c = 0; c < n_cases; ++c) {
    const CaseResult& res = results[static_cast<size_t>(policy)][static_cast<size_t>(c)];
    switch (res.outcome) {
      case OutcomeKind::Success: ++r.success; break;
      case OutcomeKind::Deadlock: ++r.deadlock; break;
      case OutcomeKind::Collision: ++r.collision; break;
    }
    if (res.outcome == OutcomeKind::Success &&
        baseline[static_cast<size_t>(c)].outcome == OutcomeKind::Success) {
      extra_sum += extra_time(policy, c);
      ++r.extra_time_cases;
    }
  }
  r.average_extra_time_s = r.extra_time_cases > 0 ? extra_sum / r.extra_time_cases : 0.0;
  return r;
}

double SuiteReport::extra_time(int policy, int case_index) const {
  return results[static_cast<size_t>(policy)][static_cast<size_t>(case_index)].total_time_s -
         baseline[static_cast<size_t>(case_index)].total_time_s;
}

namespace {

void for_each_parallel(int n, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> cursor{0};
  std::vector<std::thread> pool;
  const int workers = std::min(jobs, n);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

CaseResult to_result(const Outcome& outcome) { return {outcome.kind, outcome.total_time_s}; }

}  // namespace

SuiteReport run_suite(const std::vector<Scenario>& suite,
                      const std::vector<Assignment>& assignments, const SimConfig& cfg,
                      int jobs) {
  if (suite.empty()) throw std::invalid_argument("run_suite: empty suite");

  SuiteReport report;
  report.n_cases = static_cast<int>(suite.size());
  for (const auto& a : assignments) report.labels.push_back(a.label);
  report.results.assign(assignments.size(),
                        std::vector<CaseResult>(suite.size()));
  report.baseline.resize(suite.size());

  for_each_parallel(report.n_cases, jobs, [&](int c) {
    const Scenario& scenario = suite[static_cast<size_t>(c)];
    const std::vector<PolicyKind> central_assignment(
        static_cast<size_t>(scenario.agent_count()), PolicyKind::Centralized);
    const auto central = run(scenario, central_assignment, cfg);
    report.baseline[static_cast<size_t>(c)] = to_result(central.outcome);
    for (size_t p = 0; p < assignments.size(); ++p) {
      const auto trace = run(scenario, assignments[p].for_agents(scenario.agent_count()), cfg);
      report.results[p][static_cast<size_t>(c)] = to_result(trace.outcome);
    }
  });

  for (int c = 0; c < report.n_cases; ++c) {
    if (report.baseline[static_cast<size_t>(c)].outcome != OutcomeKind::Success) {
      report.excluded_cases.push_back(c);
    }
  }
  return report;
}

std::string report_table(const SuiteReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %-14s %-10s %-10s %-12s\n", "Policy", "Success Rate",
                "Deadlock", "Collision", "AET(second)");
  out << line;
  for (size_t p = 0; p < report.labels.size(); ++p) {
    const PolicyRow r = report.row(static_cast<int>(p));
    char rate[32], dead[32], coll[32], aet[32];
    std::snprintf(rate, sizeof(rate), "%d/%d", r.success, report.n_cases);
    std::snprintf(dead, sizeof(dead), "%d/%d", r.deadlock, report.n_cases);
    std::snprintf(coll, sizeof(coll), "%d/%d", r.collision, report.n_cases);
    if (r.extra_time_cases > 0) {
      std::snprintf(aet, sizeof(aet), "%+.3f", r.average_extra_time_s);
    } else {
      std::snprintf(aet, sizeof(aet), "n/a");
    }
    std::snprintf(line, sizeof(line), "%-12s %-14s %-10s %-10s %-12s\n", r.label.c_str(), rate,
                  dead, coll, aet);
    out << line;
  }
  if (!report.excluded_cases.empty()) {
    out << "excluded from AET (centralized baseline failed):";
    for (int c : report.excluded_cases) out << ' ' << c;
    out << '\n';
  }
  return out.str();
}

std::string report_rows_jsonl(const SuiteReport& report) {
  std::ostringstream out;
  for (size_t p = 0; p < report.labels.size(); ++p) {
    for (int c = 0; c < report.n_cases; ++c) {
      const CaseResult& res = report.results[p][static_cast<size_t>(c)];
      const CaseResult& base = report.baseline[static_cast<size_t>(c)];
      const bool joint_success =
          res.outcome == OutcomeKind::Success && base.outcome == OutcomeKind::Success;
      char extra[32];
      if (joint_success) {
        std::snprintf(extra, sizeof(extra), "%.3f", res.total_time_s - base.total_time_s);
      } else {
        std::snprintf(extra, sizeof(extra), "null");
      }
      char buf[256];
      std::snprintf(buf, sizeof(buf),
                    "{\"policy\":\"%s\",\"case\":%d,\"outcome\":\"%s\",\"time_s\":%.3f,"
                    "\"centralized_time_s\":%.3f,\"extra_time_s\":%s}\n",
                    report.labels[p].c_str(), c, outcome_name(res.outcome), res.total_time_s,
                    base.total_time_s, extra);
      out << buf;
    }
  }
  return out.str();
}

}  // namespace ipg
