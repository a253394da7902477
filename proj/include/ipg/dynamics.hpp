#pragma once

#include "ipg/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace ipg {

inline constexpr double kDefaultTs = 0.1;

// Joint control trajectory: controls[k][i] commands agent i at step k.
using JointControls = std::vector<std::vector<ControlInput>>;

// One explicit-Euler step of the unicycle model. Speed is clamped to
// v_bounds; position and heading use the pre-step state. Throws on
// non-finite input.
AgentState step(const AgentState& x, const ControlInput& u, double ts,
                const Interval& v_bounds = Interval{-1.5, 2.0});

// Rolls all agents forward through `controls`; element 0 is x0. Agents are
// dynamically decoupled. Throws if agent counts disagree.
std::vector<JointState> rollout(const JointState& x0, const JointControls& controls, double ts,
                                const std::vector<Interval>& v_bounds);

// Jacobians of step() with respect to state and input, with the speed clamp
// treated as inactive.
void linearize(const AgentState& x, const ControlInput& u, double ts,
               Eigen::Matrix4d& state_jac, Eigen::Matrix<double, 4, 2>& input_jac);

// Stacked variants used by the joint-system solver (state length 4N,
// control length 2N). Implemented on top of step()/linearize() so the two
// forms can never disagree.
Eigen::VectorXd joint_step(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double ts,
                           const std::vector<Interval>& v_bounds);
std::vector<Eigen::VectorXd> joint_rollout(const Eigen::VectorXd& x0,
                                           const std::vector<Eigen::VectorXd>& controls, double ts,
                                           const std::vector<Interval>& v_bounds);

}  // namespace ipg
