#include "ipg/costs.hpp"

#include "ipg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ipg {

std::vector<Interval> GameSpec::speed_bounds() const {
  std::vector<Interval> out;
  out.reserve(agents.size());
  for (const auto& p : agents) out.push_back(p.v_bounds);
  return out;
}

double stage_cost(const AgentState& x, const ControlInput& u, const AgentParams& p) {
  const Eigen::Vector4d e = x.vec() - p.goal_state();
  const Eigen::Vector2d uv = u.vec();
  return e.dot(p.state_weight.cwiseProduct(e)) + uv.dot(p.input_weight.cwiseProduct(uv));
}

double collision_cost(const AgentState& xi, const AgentState& xj, double d_safe, double weight) {
  const double d = (xi.position() - xj.position()).norm();
  if (d >= d_safe) return 0.0;
  const double gap = d - d_safe;
  return gap * gap * weight;
}

double backup_cost(const AgentState& x, double weight) {
  return x.v < 0.0 ? -x.v * weight : 0.0;
}

namespace {

double hinge_sq(double violation) { return violation > 0.0 ? violation * violation : 0.0; }

// Pair avoidance weight. The imagined games assign every participant the
// owner's weight so this reduces to it; the centralized game takes the
// stronger of the two true weights, keeping the pair term symmetric.
double pair_weight(const GameSpec& spec, int i, int j) {
  return std::max(spec.agents[i].safety_weight, spec.agents[j].safety_weight);
}

double terminal_cost_agent(const AgentParams& p, const Eigen::Vector4d& x) {
  const Eigen::Vector4d e = x - p.goal_state();
  return e.dot(p.state_weight.cwiseProduct(e));
}

// Penalty terms of one agent at one step.
double agent_penalties(const GameSpec& spec, int i, const Eigen::Vector2d& pos, double v,
                       const Eigen::Vector2d& u) {
  const AgentParams& p = spec.agents[static_cast<size_t>(i)];
  double total = 0.0;
  for (const auto& obs : spec.obstacles) {
    total += spec.obstacle_weight * hinge_sq(obs.margin - obs.signed_distance(pos));
  }
  total += spec.box_weight * (hinge_sq(u[0] - p.u_bounds.accel.hi) +
                              hinge_sq(p.u_bounds.accel.lo - u[0]) +
                              hinge_sq(u[1] - p.u_bounds.omega.hi) +
                              hinge_sq(p.u_bounds.omega.lo - u[1]));
  total += spec.box_weight * (hinge_sq(v - p.v_bounds.hi) + hinge_sq(p.v_bounds.lo - v));
  return total;
}

double ghost_cost(const GameSpec& spec, const Eigen::Vector2d& pos, int k) {
  double total = 0.0;
  for (const auto& g : spec.ghosts) {
    const size_t idx = std::min<size_t>(static_cast<size_t>(k), g.positions.size() - 1);
    const double d = (pos - g.positions[idx]).norm();
    if (d < g.d_safe) {
      const double gap = d - g.d_safe;
      total += gap * gap * g.weight;
    }
  }
  return total;
}

// All stage terms of agent i at step k (tracking, backup, penalties, ghosts).
double agent_stage_terms(const GameSpec& spec, int i, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u, int k) {
  const AgentParams& p = spec.agents[static_cast<size_t>(i)];
  const AgentState xi = AgentState::from_vec(x.segment<4>(4 * i));
  const ControlInput ui = ControlInput::from_vec(u.segment<2>(2 * i));
  return stage_cost(xi, ui, p) + backup_cost(xi, p.backup_weight) +
         agent_penalties(spec, i, xi.position(), xi.v, ui.vec()) +
         ghost_cost(spec, xi.position(), k);
}

double pair_term(const GameSpec& spec, int i, int j, const Eigen::VectorXd& x) {
  const AgentState xi = AgentState::from_vec(x.segment<4>(4 * i));
  const AgentState xj = AgentState::from_vec(x.segment<4>(4 * j));
  return collision_cost(xi, xj, spec.d_safe(i, j), pair_weight(spec, i, j));
}

void check_lengths(const std::vector<Eigen::VectorXd>& xs, const std::vector<Eigen::VectorXd>& us,
                   const GameSpec& spec) {
  if (xs.size() != us.size() + 1) throw std::invalid_argument("potential: xs/us length mismatch");
  const int n = spec.agent_count();
  for (const auto& x : xs) {
    if (x.size() != 4 * n) throw std::invalid_argument("potential: state dimension mismatch");
  }
  for (const auto& u : us) {
    if (u.size() != 2 * n) throw std::invalid_argument("potential: control dimension mismatch");
  }
}

}  // namespace

double constraint_penalties(const JointState& x, const std::vector<ControlInput>& u,
                            const GameSpec& spec) {
  double total = 0.0;
  for (int i = 0; i < spec.agent_count(); ++i) {
    const auto& xi = x[static_cast<size_t>(i)];
    total += agent_penalties(spec, i, xi.position(), xi.v, u[static_cast<size_t>(i)].vec());
  }
  return total;
}

double potential(const std::vector<Eigen::VectorXd>& xs, const std::vector<Eigen::VectorXd>& us,
                 const GameSpec& spec) {
  check_lengths(xs, us, spec);
  const int n = spec.agent_count();
  double total = 0.0;
  for (size_t k = 0; k < us.size(); ++k) {
    for (int i = 0; i < n; ++i) {
      total += agent_stage_terms(spec, i, xs[k], us[k], static_cast<int>(k));
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) total += pair_term(spec, i, j, xs[k]);
    }
  }
  for (int i = 0; i < n; ++i) {
    total += terminal_cost_agent(spec.agents[static_cast<size_t>(i)],
                                 xs.back().segment<4>(4 * i));
  }
  return total;
}

double individual_cost(int agent, const std::vector<Eigen::VectorXd>& xs,
                       const std::vector<Eigen::VectorXd>& us, const GameSpec& spec) {
  check_lengths(xs, us, spec);
  const int n = spec.agent_count();
  double total = 0.0;
  for (size_t k = 0; k < us.size(); ++k) {
    total += agent_stage_terms(spec, agent, xs[k], us[k], static_cast<int>(k));
    for (int j = 0; j < n; ++j) {
      if (j != agent) total += pair_term(spec, std::min(agent, j), std::max(agent, j), xs[k]);
    }
  }
  total += terminal_cost_agent(spec.agents[static_cast<size_t>(agent)],
                               xs.back().segment<4>(4 * agent));
  return total;
}

PotentialQuadratics quadratize(const std::vector<Eigen::VectorXd>& xs,
                               const std::vector<Eigen::VectorXd>& us, const GameSpec& spec) {
  check_lengths(xs, us, spec);
  const int n = spec.agent_count();
  const int nx = 4 * n;
  const int nu = 2 * n;

  PotentialQuadratics out;
  out.steps.resize(us.size());

  for (size_t k = 0; k < us.size(); ++k) {
    StepQuadratic& q = out.steps[k];
    q.grad_x = Eigen::VectorXd::Zero(nx);
    q.grad_u = Eigen::VectorXd::Zero(nu);
    q.hess_xx = Eigen::MatrixXd::Zero(nx, nx);
    q.hess_uu = Eigen::MatrixXd::Zero(nu, nu);
    q.hess_ux = Eigen::MatrixXd::Zero(nu, nx);
    const Eigen::VectorXd& x = xs[k];
    const Eigen::VectorXd& u = us[k];

    for (int i = 0; i < n; ++i) {
      const AgentParams& p = spec.agents[static_cast<size_t>(i)];
      const int si = 4 * i;
      const int ci = 2 * i;

      // Tracking quadratics (exact).
      const Eigen::Vector4d e = x.segment<4>(si) - p.goal_state();
      q.grad_x.segment<4>(si) += 2.0 * p.state_weight.cwiseProduct(e);
      q.hess_xx.block<4, 4>(si, si) += (2.0 * p.state_weight).asDiagonal();
      const Eigen::Vector2d uv = u.segment<2>(ci);
      q.grad_u.segment<2>(ci) += 2.0 * p.input_weight.cwiseProduct(uv);
      q.hess_uu.block<2, 2>(ci, ci) += (2.0 * p.input_weight).asDiagonal();

      // Backup term: one-sided linear in v.
      if (x[si + 3] < 0.0) q.grad_x[si + 3] -= p.backup_weight;

      // Obstacle hinges: Gauss-Newton on the clearance residual.
      const Eigen::Vector2d pos = x.segment<2>(si);
      for (const auto& obs : spec.obstacles) {
        const double h = obs.margin - obs.signed_distance(pos);
        if (h <= 0.0) continue;
        const Eigen::Vector2d g = obs.distance_gradient(pos);
        q.grad_x.segment<2>(si) -= 2.0 * spec.obstacle_weight * h * g;
        // Outer product before scaling keeps the block exactly symmetric.
        q.hess_xx.block<2, 2>(si, si) += (g * g.transpose()) * (2.0 * spec.obstacle_weight);
      }

      // Ghost hinges, same structure as agent pairs with one side frozen.
      for (const auto& g : spec.ghosts) {
        const size_t idx = std::min<size_t>(k, g.positions.size() - 1);
        const Eigen::Vector2d delta = pos - g.positions[idx];
        const double d = delta.norm();
        if (d >= g.d_safe || d < 1e-9) continue;
        const Eigen::Vector2d dir = delta / d;
        q.grad_x.segment<2>(si) += 2.0 * g.weight * (d - g.d_safe) * dir;
        q.hess_xx.block<2, 2>(si, si) += (dir * dir.transpose()) * (2.0 * g.weight);
      }

      // Box hinges are one-sided quadratics: exact derivatives.
      const auto add_box = [&](double val, const Interval& b, double& grad, double& hess) {
        if (val > b.hi) {
          grad += 2.0 * spec.box_weight * (val - b.hi);
          hess += 2.0 * spec.box_weight;
        } else if (val < b.lo) {
          grad += 2.0 * spec.box_weight * (val - b.lo);
          hess += 2.0 * spec.box_weight;
        }
      };
      add_box(u[ci], p.u_bounds.accel, q.grad_u[ci], q.hess_uu(ci, ci));
      add_box(u[ci + 1], p.u_bounds.omega, q.grad_u[ci + 1], q.hess_uu(ci + 1, ci + 1));
      add_box(x[si + 3], p.v_bounds, q.grad_x[si + 3], q.hess_xx(si + 3, si + 3));
    }

    // Pairwise avoidance: Gauss-Newton on the distance residual.
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const int si = 4 * i, sj = 4 * j;
        const Eigen::Vector2d delta = x.segment<2>(si) - x.segment<2>(sj);
        const double d = delta.norm();
        const double dsafe = spec.d_safe(i, j);
        if (d >= dsafe || d < 1e-9) continue;
        const double w = pair_weight(spec, i, j);
        const Eigen::Vector2d dir = delta / d;
        const Eigen::Vector2d g = 2.0 * w * (d - dsafe) * dir;
        q.grad_x.segment<2>(si) += g;
        q.grad_x.segment<2>(sj) -= g;
        const Eigen::Matrix2d h = (dir * dir.transpose()) * (2.0 * w);
        q.hess_xx.block<2, 2>(si, si) += h;
        q.hess_xx.block<2, 2>(sj, sj) += h;
        q.hess_xx.block<2, 2>(si, sj) -= h;
        q.hess_xx.block<2, 2>(sj, si) -= h;
      }
    }
  }

  out.terminal_grad = Eigen::VectorXd::Zero(nx);
  out.terminal_hess = Eigen::MatrixXd::Zero(nx, nx);
  for (int i = 0; i < n; ++i) {
    const AgentParams& p = spec.agents[static_cast<size_t>(i)];
    const Eigen::Vector4d e = xs.back().segment<4>(4 * i) - p.goal_state();
    out.terminal_grad.segment<4>(4 * i) = 2.0 * p.state_weight.cwiseProduct(e);
    out.terminal_hess.block<4, 4>(4 * i, 4 * i) = (2.0 * p.state_weight).asDiagonal();
  }
  return out;
}

double potential_of_controls(const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& us,
                             const GameSpec& spec) {
  const auto xs = joint_rollout(x0, us, spec.ts, spec.speed_bounds());
  return potential(xs, us, spec);
}

double individual_cost_of_controls(int agent, const Eigen::VectorXd& x0,
                                   const std::vector<Eigen::VectorXd>& us, const GameSpec& spec) {
  const auto xs = joint_rollout(x0, us, spec.ts, spec.speed_bounds());
  return individual_cost(agent, xs, us, spec);
}

}  // namespace ipg
