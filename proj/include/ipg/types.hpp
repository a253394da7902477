#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace ipg {

// Pose and longitudinal speed of one unicycle agent.
struct AgentState {
  double px = 0.0;
  double py = 0.0;
  double theta = 0.0;
  double v = 0.0;

  Eigen::Vector2d position() const { return {px, py}; }
  Eigen::Vector4d vec() const { return {px, py, theta, v}; }
  static AgentState from_vec(const Eigen::Vector4d& x) { return {x[0], x[1], x[2], x[3]}; }
  bool finite() const {
    return std::isfinite(px) && std::isfinite(py) && std::isfinite(theta) && std::isfinite(v);
  }
};

// Acceleration and angular-velocity command.
struct ControlInput {
  double a = 0.0;
  double w = 0.0;

  Eigen::Vector2d vec() const { return {a, w}; }
  static ControlInput from_vec(const Eigen::Vector2d& u) { return {u[0], u[1]}; }
  bool finite() const { return std::isfinite(a) && std::isfinite(w); }
};

// World state: one AgentState per agent, order fixed for a run.
using JointState = std::vector<AgentState>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct InputBounds {
  Interval accel{-2.0, 2.0};
  Interval omega{-2.0, 2.0};

  ControlInput clamp(const ControlInput& u) const { return {accel.clamp(u.a), omega.clamp(u.w)}; }
};

// Per-agent goal, cost weights, and limits. Defaults follow the standard
// configuration; weights are interpreted as diagonal quadratic weights.
struct AgentParams {
  Eigen::Vector2d goal{0.0, 0.0};
  double goal_heading = 0.0;  // only felt when state_weight[2] > 0
  double goal_speed = 0.0;    // only felt when state_weight[3] > 0

  Eigen::Vector4d state_weight{0.01, 0.01, 0.0, 0.0};  // on [px, py, theta, v]
  // Effort penalty on the per-step state increments (ts^2-scaled): with the
  // standard position weights, a unit weight on raw accelerations would make
  // standing still cheaper than any multi-meter trip.
  Eigen::Vector2d input_weight{0.01, 0.01};  // on [a, w]
  double safety_weight = 40.0;                         // inter-agent avoidance
  double backup_weight = 10.0;                         // reverse-motion penalty
  double safety_radius = 1.5;                          // comfort distance, not physical size
  double sensing_range = 5.0;                          // rear visibility limit

  InputBounds u_bounds;
  Interval v_bounds{-1.5, 2.0};

  Eigen::Vector4d goal_state() const { return {goal.x(), goal.y(), goal_heading, goal_speed}; }
};

inline Eigen::VectorXd stack_states(const JointState& x) {
  Eigen::VectorXd out(4 * static_cast<int>(x.size()));
  for (int i = 0; i < static_cast<int>(x.size()); ++i) out.segment<4>(4 * i) = x[i].vec();
  return out;
}

inline JointState unstack_states(const Eigen::VectorXd& x) {
  JointState out(static_cast<size_t>(x.size() / 4));
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = AgentState::from_vec(x.segment<4>(4 * static_cast<int>(i)));
  return out;
}

}  // namespace ipg
