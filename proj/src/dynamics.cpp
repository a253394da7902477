#include "ipg/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace ipg {

AgentState step(const AgentState& x, const ControlInput& u, double ts, const Interval& v_bounds) {
  if (!x.finite() || !u.finite() || !std::isfinite(ts)) {
    throw std::invalid_argument("step: non-finite state or input");
  }
  if (ts <= 0.0) throw std::invalid_argument("step: ts must be positive");

  AgentState next;
  next.px = x.px + ts * x.v * std::cos(x.theta);
  next.py = x.py + ts * x.v * std::sin(x.theta);
  next.theta = x.theta + ts * u.w;
  next.v = v_bounds.clamp(x.v + ts * u.a);
  return next;
}

std::vector<JointState> rollout(const JointState& x0, const JointControls& controls, double ts,
                                const std::vector<Interval>& v_bounds) {
  const size_t n = x0.size();
  if (v_bounds.size() != n) throw std::invalid_argument("rollout: v_bounds size mismatch");
  for (const auto& uk : controls) {
    if (uk.size() != n) throw std::invalid_argument("rollout: control agent count mismatch");
  }

  std::vector<JointState> xs;
  xs.reserve(controls.size() + 1);
  xs.push_back(x0);
  for (const auto& uk : controls) {
    JointState next(n);
    for (size_t i = 0; i < n; ++i) next[i] = step(xs.back()[i], uk[i], ts, v_bounds[i]);
    xs.push_back(std::move(next));
  }
  return xs;
}

void linearize(const AgentState& x, const ControlInput& u, double ts,
               Eigen::Matrix4d& state_jac, Eigen::Matrix<double, 4, 2>& input_jac) {
  if (!x.finite() || !u.finite()) throw std::invalid_argument("linearize: non-finite input");

  const double c = std::cos(x.theta);
  const double s = std::sin(x.theta);
  state_jac.setIdentity();
  state_jac(0, 2) = -ts * x.v * s;
  state_jac(0, 3) = ts * c;
  state_jac(1, 2) = ts * x.v * c;
  state_jac(1, 3) = ts * s;

  input_jac.setZero();
  input_jac(2, 1) = ts;  // heading <- angular velocity
  input_jac(3, 0) = ts;  // speed <- acceleration
}

Eigen::VectorXd joint_step(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double ts,
                           const std::vector<Interval>& v_bounds) {
  const int n = static_cast<int>(x.size()) / 4;
  Eigen::VectorXd next(x.size());
  for (int i = 0; i < n; ++i) {
    const AgentState xi = AgentState::from_vec(x.segment<4>(4 * i));
    const ControlInput ui = ControlInput::from_vec(u.segment<2>(2 * i));
    next.segment<4>(4 * i) = step(xi, ui, ts, v_bounds[static_cast<size_t>(i)]).vec();
  }
  return next;
}

std::vector<Eigen::VectorXd> joint_rollout(const Eigen::VectorXd& x0,
                                           const std::vector<Eigen::VectorXd>& controls, double ts,
                                           const std::vector<Interval>& v_bounds) {
  std::vector<Eigen::VectorXd> xs;
  xs.reserve(controls.size() + 1);
  xs.push_back(x0);
  for (const auto& uk : controls) xs.push_back(joint_step(xs.back(), uk, ts, v_bounds));
  return xs;
}

}  // namespace ipg
