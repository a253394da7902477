#pragma once

#include "ipg/game.hpp"
#include "ipg/solver.hpp"
#include "ipg/types.hpp"

#include <string>
#include <vector>

namespace ipg {

enum class PolicyKind { IPG, Vanilla, Brake, Ignore, Centralized };

const char* policy_name(PolicyKind kind);
bool parse_policy(const std::string& name, PolicyKind& out);

struct PolicyConfig {
  SolverConfig solver;
  double ts = 0.1;
  double obstacle_weight = 100.0;
  double box_weight = 100.0;
  double contact_radius = 0.5;  // feasibility threshold shared with the sim

  GameBuildConfig build_cfg() const {
    return {solver.horizon, ts, obstacle_weight, box_weight};
  }
};

// One agent's planned trajectory inside somebody's plan, tagged with the
// scenario agent index it belongs to.
struct PlannedAgent {
  int id = 0;
  std::vector<AgentState> states;  // horizon + 1 entries
};

struct AgentDecision {
  ControlInput control;
  bool feasible = true;
  bool converged = false;
  double plan_cost = 0.0;
  std::vector<PlannedAgent> plan;  // ego's plan for itself plus its predictions
};

// Per-agent mutable policy state: solver warm start plus the plan currently
// being followed (used when a fresh solve is rejected).
struct PolicyCache {
  PlanCache plans;
  std::vector<ControlInput> committed;
  bool has_committed = false;
};

// Constant-velocity forecast: zero-control unicycle propagation.
std::vector<AgentState> constant_velocity_prediction(const AgentState& x, int horizon, double ts);

// Solves the ego's imagined game over everyone it observes and commits the
// first control of its own slot. Solver stalls still yield the best plan
// found; this policy never substitutes a reflex action.
AgentDecision ipg_decide(const Observation& obs, const AgentParams& ego_params, PolicyCache& cache,
                         const PolicyConfig& cfg);

// Single-agent plan against constant-velocity forecasts of the others. If
// the plan keeps everyone at contact distance and stays out of obstacles it
// is committed; otherwise the previously committed plan is advanced one step
// and followed (zero control when there is none).
AgentDecision vanilla_decide(const Observation& obs, const AgentParams& ego_params,
                             PolicyCache& cache, const PolicyConfig& cfg);

// Like vanilla, but an infeasible plan triggers a full stop instead of plan
// reuse.
AgentDecision brake_decide(const Observation& obs, const AgentParams& ego_params,
                           PolicyCache& cache, const PolicyConfig& cfg);

// Plans against static obstacles only; other agents never enter the cost.
AgentDecision ignore_decide(const Observation& obs, const AgentParams& ego_params,
                            PolicyCache& cache, const PolicyConfig& cfg);

// Ground-truth joint solve; returns one decision per agent, all carrying the
// shared plan.
std::vector<AgentDecision> centralized_decide(const JointState& world, const Scenario& scenario,
                                              PolicyCache& cache, const PolicyConfig& cfg);

// Stateful wrapper binding one agent to its policy kind and caches.
class AgentPolicy {
 public:
  AgentPolicy(PolicyKind kind, AgentParams params, PolicyConfig cfg);
  AgentDecision decide(const Observation& obs);
  PolicyKind kind() const { return kind_; }

 private:
  PolicyKind kind_;
  AgentParams params_;
  PolicyConfig cfg_;
  PolicyCache cache_;
};

}  // namespace ipg
