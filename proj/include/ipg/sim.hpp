#pragma once

#include "ipg/policies.hpp"
#include "ipg/scenarios.hpp"
#include "ipg/solver.hpp"
#include "ipg/types.hpp"

#include <cstdint>
#include <vector>

namespace ipg {

struct SimConfig {
  double ts = 0.1;
  int max_steps = 600;
  double goal_tolerance = 0.3;
  double arrival_speed = 0.1;   // |v| below this counts as stopped at the goal
  double contact_radius = 0.5;  // physical collision threshold
  std::uint64_t seed = 0;
  int threads = 0;  // concurrent per-agent decisions; 0 = sequential
  SolverConfig solver;
  double obstacle_weight = 100.0;
  double box_weight = 100.0;

  PolicyConfig policy_cfg() const {
    return {solver, ts, obstacle_weight, box_weight, contact_radius};
  }
};

enum class OutcomeKind { Success, Collision, Deadlock };

const char* outcome_name(OutcomeKind kind);

struct Outcome {
  OutcomeKind kind = OutcomeKind::Deadlock;
  std::vector<double> arrival_time_s;  // -1 for agents that never arrived
  double total_time_s = 0.0;           // last arrival for Success, end of run otherwise
};

struct SimTrace {
  std::vector<JointState> states;                     // steps + 1
  std::vector<std::vector<ControlInput>> controls;    // executed, steps entries
  std::vector<std::vector<AgentDecision>> decisions;  // per step, per agent
  std::vector<int> arrival_step;                      // -1 when unreached
  int first_collision_step = -1;
  Outcome outcome;

  int steps() const { return static_cast<int>(controls.size()); }
};

// Closed-loop receding-horizon execution: every step all agents decide from
// the same snapshot, then all states advance synchronously. Terminates on
// Success (all agents latched at their goals), Collision (contact distance
// or obstacle penetration, immediate stop), or Deadlock (step limit).
// Arrived agents latch: speed zeroed, then held exactly in place under zero
// control. Throws on non-finite states.
SimTrace run(const Scenario& scenario, const std::vector<PolicyKind>& assignment,
             const SimConfig& cfg);

// Outcome classification of a finished trace under the run() rules.
Outcome classify(const SimTrace& trace, const Scenario& scenario, const SimConfig& cfg);

// Re-derives the state sequence from recorded controls through the dynamics
// and the arrival-latching rule. Bit-identical to the recorded states.
std::vector<JointState> replay_states(const Scenario& scenario, const SimConfig& cfg,
                                      const JointState& x0,
                                      const std::vector<std::vector<ControlInput>>& controls);

}  // namespace ipg
