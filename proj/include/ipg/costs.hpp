#pragma once

#include "ipg/obstacles.hpp"
#include "ipg/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace ipg {

// A known moving point the planning agent must stay clear of (constant
// velocity prediction of an agent it does not model as a game participant).
struct Ghost {
  std::vector<Eigen::Vector2d> positions;  // one per step, index 0..T
  double d_safe = 1.5;
  double weight = 40.0;
};

// Everything one joint trajectory optimization needs: participating agents
// with the parameters the game owner assigns them, the pairwise safety
// distances, obstacles, and penalty weights.
struct GameSpec {
  std::vector<AgentParams> agents;
  Eigen::MatrixXd d_safe;  // symmetric, positive; entry (i, j) for pair i != j
  std::vector<Obstacle> obstacles;
  std::vector<Ghost> ghosts;
  int horizon = 30;
  double ts = 0.1;
  double obstacle_weight = 100.0;  // W_obs
  double box_weight = 100.0;       // W_box

  int agent_count() const { return static_cast<int>(agents.size()); }
  std::vector<Interval> speed_bounds() const;
};

// Per-agent quadratic tracking cost: goal residual under the diagonal state
// weights plus the quadratic input penalty.
double stage_cost(const AgentState& x, const ControlInput& u, const AgentParams& p);

// Pairwise avoidance: zero outside d_safe, quadratic ramp inside. Symmetric
// in its two state arguments.
double collision_cost(const AgentState& xi, const AgentState& xj, double d_safe, double weight);

// Linear penalty on reversing (v < 0).
double backup_cost(const AgentState& x, double weight);

// One-sided quadratic hinge penalties: obstacle clearance below the margin,
// control outside its box, speed outside its box. Summed over agents.
double constraint_penalties(const JointState& x, const std::vector<ControlInput>& u,
                            const GameSpec& spec);

// Joint potential over a state/control trajectory (stacked form: states are
// 4N vectors, controls 2N). Stage terms at k = 0..T-1, goal quadratic at T.
double potential(const std::vector<Eigen::VectorXd>& xs, const std::vector<Eigen::VectorXd>& us,
                 const GameSpec& spec);

// Agent i's full cost along the same trajectory: its tracking, backup and
// penalty terms plus every avoidance pair it participates in. The potential
// minus this cost has no dependence on agent i's states or controls.
double individual_cost(int agent, const std::vector<Eigen::VectorXd>& xs,
                       const std::vector<Eigen::VectorXd>& us, const GameSpec& spec);

// Local quadratic model of the potential at one step.
struct StepQuadratic {
  Eigen::VectorXd grad_x;   // 4N
  Eigen::VectorXd grad_u;   // 2N
  Eigen::MatrixXd hess_xx;  // 4N x 4N, PSD (Gauss-Newton on distance residuals)
  Eigen::MatrixXd hess_uu;  // 2N x 2N, positive definite
  Eigen::MatrixXd hess_ux;  // 2N x 4N, zero for this cost structure
};

struct PotentialQuadratics {
  std::vector<StepQuadratic> steps;  // T entries
  Eigen::VectorXd terminal_grad;     // 4N
  Eigen::MatrixXd terminal_hess;     // 4N x 4N
};

PotentialQuadratics quadratize(const std::vector<Eigen::VectorXd>& xs,
                               const std::vector<Eigen::VectorXd>& us, const GameSpec& spec);

// Convenience: potential of a control sequence from x0, through the rollout.
double potential_of_controls(const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& us,
                             const GameSpec& spec);
double individual_cost_of_controls(int agent, const Eigen::VectorXd& x0,
                                   const std::vector<Eigen::VectorXd>& us, const GameSpec& spec);

}  // namespace ipg
