// Random problem instances shared by the cost/solver tests and the
// acceptance suite. Sampling puts agents close enough together that the
// avoidance terms are frequently active.
#pragma once

#include "ipg/costs.hpp"
#include "ipg/dynamics.hpp"
#include "ipg/obstacles.hpp"

#include "oracles.hpp"

#include <random>
#include <vector>

namespace instances {

struct Instance {
  ipg::GameSpec spec;
  ipg::JointState x0;
  std::vector<Eigen::VectorXd> controls;
};

inline Instance random_instance(std::mt19937_64& rng, int n_agents, int horizon,
                                bool with_obstacles = true) {
  using oracles::uniform;

  Instance inst;
  inst.spec.horizon = horizon;
  inst.spec.ts = 0.1;
  inst.spec.d_safe.resize(n_agents, n_agents);

  for (int i = 0; i < n_agents; ++i) {
    ipg::AgentParams p;
    p.goal = {uniform(rng, -5, 5), uniform(rng, -5, 5)};
    const double q = uniform(rng, 0.005, 0.02);
    p.state_weight = {q, q, 0.0, 0.0};
    p.input_weight = {uniform(rng, 0.5, 1.5), uniform(rng, 0.5, 1.5)};
    p.safety_weight = uniform(rng, 20, 60);
    p.backup_weight = uniform(rng, 5, 15);
    p.safety_radius = uniform(rng, 1.2, 2.0);
    inst.spec.agents.push_back(p);

    inst.x0.push_back({uniform(rng, -2.5, 2.5), uniform(rng, -2.5, 2.5), uniform(rng, -3, 3),
                       uniform(rng, -1.0, 1.5)});
  }
  for (int i = 0; i < n_agents; ++i) {
    for (int j = 0; j < n_agents; ++j) {
      inst.spec.d_safe(i, j) = std::max(inst.spec.agents[i].safety_radius,
                                        inst.spec.agents[j].safety_radius);
    }
  }

  if (with_obstacles) {
    inst.spec.obstacles.push_back(ipg::Obstacle::circle(
        {uniform(rng, -3, 3), uniform(rng, -3, 3)}, uniform(rng, 0.4, 1.0)));
    inst.spec.obstacles.push_back(
        ipg::Obstacle::rect({uniform(rng, -4, -1), uniform(rng, -4, -1)},
                            {uniform(rng, 1, 4), uniform(rng, 1, 4)}, 0.3));
    // Keep starts out of the obstacles so rollouts stay meaningful.
    for (auto& x : inst.x0) {
      for (const auto& o : inst.spec.obstacles) {
        while (o.signed_distance(x.position()) < 0.05) {
          x.px += 1.0;
          x.py += 0.7;
        }
      }
    }
  }

  inst.controls.assign(static_cast<size_t>(horizon), Eigen::VectorXd::Zero(2 * n_agents));
  for (auto& uk : inst.controls) {
    for (int c = 0; c < uk.size(); ++c) uk[c] = uniform(rng, -1.8, 1.8);
  }
  return inst;
}

inline std::vector<Eigen::VectorXd> rollout_of(const Instance& inst) {
  return ipg::joint_rollout(ipg::stack_states(inst.x0), inst.controls, inst.spec.ts,
                            inst.spec.speed_bounds());
}

// Agent i's controls flattened over the horizon, and the inverse.
inline Eigen::VectorXd extract_agent_controls(const std::vector<Eigen::VectorXd>& us, int agent) {
  Eigen::VectorXd flat(2 * static_cast<int>(us.size()));
  for (size_t k = 0; k < us.size(); ++k) flat.segment<2>(2 * static_cast<int>(k)) = us[k].segment<2>(2 * agent);
  return flat;
}

inline std::vector<Eigen::VectorXd> with_agent_controls(const std::vector<Eigen::VectorXd>& us,
                                                        int agent, const Eigen::VectorXd& flat) {
  std::vector<Eigen::VectorXd> out = us;
  for (size_t k = 0; k < us.size(); ++k) out[k].segment<2>(2 * agent) = flat.segment<2>(2 * static_cast<int>(k));
  return out;
}

}  // namespace instances
