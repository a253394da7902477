#include "ipg/solver.hpp"

#include "ipg/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace ipg {

namespace {

Eigen::VectorXd clamp_controls(const Eigen::VectorXd& u, const GameSpec& spec) {
  Eigen::VectorXd out = u;
  for (int i = 0; i < spec.agent_count(); ++i) {
    const auto& b = spec.agents[static_cast<size_t>(i)].u_bounds;
    out[2 * i] = b.accel.clamp(out[2 * i]);
    out[2 * i + 1] = b.omega.clamp(out[2 * i + 1]);
  }
  return out;
}

struct BackwardPassResult {
  std::vector<Eigen::VectorXd> feedforward;  // k terms
  std::vector<Eigen::MatrixXd> feedback;     // K terms
  double expected_linear = 0.0;              // sum k' Qu
  double expected_quadratic = 0.0;           // sum 0.5 k' Quu k
  bool ok = false;
};

BackwardPassResult backward_pass(const std::vector<Eigen::VectorXd>& xs,
                                 const std::vector<Eigen::VectorXd>& us,
                                 const PotentialQuadratics& quad, const GameSpec& spec,
                                 double reg) {
  const int n = spec.agent_count();
  const int nx = 4 * n;
  const int nu = 2 * n;
  const size_t horizon = us.size();

  BackwardPassResult res;
  res.feedforward.resize(horizon);
  res.feedback.resize(horizon);

  Eigen::VectorXd value_grad = quad.terminal_grad;
  Eigen::MatrixXd value_hess = quad.terminal_hess;

  Eigen::MatrixXd state_jac = Eigen::MatrixXd::Zero(nx, nx);
  Eigen::MatrixXd input_jac = Eigen::MatrixXd::Zero(nx, nu);

  for (size_t k = horizon; k-- > 0;) {
    for (int i = 0; i < n; ++i) {
      Eigen::Matrix4d a;
      Eigen::Matrix<double, 4, 2> b;
      linearize(AgentState::from_vec(xs[k].segment<4>(4 * i)),
                ControlInput::from_vec(us[k].segment<2>(2 * i)), spec.ts, a, b);
      state_jac.block<4, 4>(4 * i, 4 * i) = a;
      input_jac.block<4, 2>(4 * i, 2 * i) = b;
    }

    const StepQuadratic& q = quad.steps[k];
    const Eigen::VectorXd qx = q.grad_x + state_jac.transpose() * value_grad;
    const Eigen::VectorXd qu = q.grad_u + input_jac.transpose() * value_grad;
    const Eigen::MatrixXd qxx = q.hess_xx + state_jac.transpose() * value_hess * state_jac;
    const Eigen::MatrixXd quu = q.hess_uu + input_jac.transpose() * value_hess * input_jac;
    const Eigen::MatrixXd qux = q.hess_ux + input_jac.transpose() * value_hess * state_jac;

    Eigen::MatrixXd quu_reg = quu;
    quu_reg.diagonal().array() += reg;
    const Eigen::LLT<Eigen::MatrixXd> llt(quu_reg);
    if (llt.info() != Eigen::Success) return res;

    const Eigen::VectorXd kff = -llt.solve(qu);
    const Eigen::MatrixXd kfb = -llt.solve(qux);

    res.expected_linear += kff.dot(qu);
    res.expected_quadratic += 0.5 * kff.dot(quu * kff);

    value_grad = qx + kfb.transpose() * quu * kff + kfb.transpose() * qu + qux.transpose() * kff;
    value_hess = qxx + kfb.transpose() * quu * kfb + kfb.transpose() * qux + qux.transpose() * kfb;
    value_hess = 0.5 * (value_hess + value_hess.transpose()).eval();

    res.feedforward[k] = kff;
    res.feedback[k] = kfb;
  }
  res.ok = true;
  return res;
}

}  // namespace

JointPlan solve(const JointState& x0, const GameSpec& spec,
                const std::vector<Eigen::VectorXd>& u_init, const SolverConfig& cfg) {
  const int n = spec.agent_count();
  if (static_cast<int>(x0.size()) != n) {
    throw std::invalid_argument("solve: initial state has wrong agent count");
  }
  const size_t horizon = static_cast<size_t>(spec.horizon);
  if (!u_init.empty() && u_init.size() != horizon) {
    throw std::invalid_argument("solve: u_init horizon mismatch");
  }

  const auto v_bounds = spec.speed_bounds();
  const Eigen::VectorXd x0_vec = stack_states(x0);

  JointPlan plan;
  plan.controls.assign(horizon, Eigen::VectorXd::Zero(2 * n));
  for (size_t k = 0; k < u_init.size(); ++k) plan.controls[k] = clamp_controls(u_init[k], spec);
  plan.states = joint_rollout(x0_vec, plan.controls, spec.ts, v_bounds);
  plan.cost = potential(plan.states, plan.controls, spec);
  plan.cost_history.push_back(plan.cost);

  double reg = cfg.reg_init;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    plan.iterations = iter + 1;
    const PotentialQuadratics quad = quadratize(plan.states, plan.controls, spec);

    BackwardPassResult bp = backward_pass(plan.states, plan.controls, quad, spec, reg);
    while (!bp.ok) {
      reg *= cfg.reg_growth;
      if (reg > cfg.reg_max) return plan;  // stalled: best-so-far, converged stays false
      bp = backward_pass(plan.states, plan.controls, quad, spec, reg);
    }

    // Stationary point: nothing left to gain from any step length.
    const double expected_full = -(bp.expected_linear + bp.expected_quadratic);
    if (std::abs(expected_full) < 1e-12 * std::max(1.0, std::abs(plan.cost))) {
      plan.converged = true;
      return plan;
    }

    bool accepted = false;
    for (const double alpha : cfg.line_search_steps) {
      std::vector<Eigen::VectorXd> new_us(horizon);
      std::vector<Eigen::VectorXd> new_xs;
      new_xs.reserve(horizon + 1);
      new_xs.push_back(x0_vec);
      for (size_t k = 0; k < horizon; ++k) {
        const Eigen::VectorXd du =
            alpha * bp.feedforward[k] + bp.feedback[k] * (new_xs[k] - plan.states[k]);
        new_us[k] = clamp_controls(plan.controls[k] + du, spec);
        new_xs.push_back(joint_step(new_xs[k], new_us[k], spec.ts, v_bounds));
      }
      const double new_cost = potential(new_xs, new_us, spec);
      if (new_cost < plan.cost) {
        const double decrease = plan.cost - new_cost;
        plan.controls = std::move(new_us);
        plan.states = std::move(new_xs);
        plan.cost = new_cost;
        plan.cost_history.push_back(new_cost);
        reg *= cfg.reg_shrink;
        accepted = true;
        if (decrease < cfg.tolerance * std::max(std::abs(new_cost + decrease), 1e-12)) {
          plan.converged = true;
          return plan;
        }
        break;
      }
    }

    if (!accepted) {
      reg *= cfg.reg_growth;
      if (reg > cfg.reg_max) return plan;  // stalled
    }
  }
  return plan;
}

}  // namespace ipg
