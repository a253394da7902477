#pragma once

#include "ipg/costs.hpp"
#include "ipg/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace ipg {

struct SolverConfig {
  int max_iterations = 100;
  double tolerance = 1e-4;  // relative cost decrease at which to stop
  double reg_init = 1e-6;
  double reg_growth = 10.0;
  double reg_shrink = 0.5;
  double reg_max = 1e8;
  std::vector<double> line_search_steps{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
  int horizon = 30;
};

// Open-loop joint plan: controls[k] stacks all agents' inputs at step k,
// states is the exact rollout of controls from the solve's initial state,
// and cost is the potential of that trajectory.
struct JointPlan {
  std::vector<Eigen::VectorXd> controls;  // T entries of length 2N
  std::vector<Eigen::VectorXd> states;    // T+1 entries of length 4N
  double cost = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> cost_history;  // initial cost, then each accepted iteration

  ControlInput agent_control(int step, int agent) const {
    return ControlInput::from_vec(controls[static_cast<size_t>(step)].segment<2>(2 * agent));
  }
  AgentState agent_state(int step, int agent) const {
    return AgentState::from_vec(states[static_cast<size_t>(step)].segment<4>(4 * agent));
  }
};

// Minimizes the potential of `spec` over the stacked joint system by iLQR
// with Levenberg-style regularization and backtracking line search. Controls
// are clamped to each agent's input box on every forward pass. An empty
// `u_init` starts from zeros. Accepted iterations never increase the cost;
// converged is false when regularization hits its cap without an accepted
// step before the tolerance is met.
JointPlan solve(const JointState& x0, const GameSpec& spec,
                const std::vector<Eigen::VectorXd>& u_init, const SolverConfig& cfg);

}  // namespace ipg
