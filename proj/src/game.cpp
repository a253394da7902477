#include "ipg/game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ipg {

int Observation::ego_slot() const {
  for (size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].index == ego_index) return static_cast<int>(i);
  }
  throw std::logic_error("observation does not contain the ego agent");
}

std::vector<int> Observation::agent_ids() const {
  std::vector<int> ids;
  ids.reserve(agents.size());
  for (const auto& a : agents) ids.push_back(a.index);
  return ids;
}

JointState Observation::states() const {
  JointState xs;
  xs.reserve(agents.size());
  for (const auto& a : agents) xs.push_back(a.state);
  return xs;
}

Observation observe(const JointState& world, int ego, const Scenario& scenario) {
  if (ego < 0 || ego >= scenario.agent_count()) throw std::invalid_argument("observe: bad ego");

  const AgentState& ego_state = world[static_cast<size_t>(ego)];
  const Eigen::Vector2d ego_pos = ego_state.position();
  const Eigen::Vector2d heading{std::cos(ego_state.theta), std::sin(ego_state.theta)};
  const double sensing = scenario.params[static_cast<size_t>(ego)].sensing_range;

  Observation obs;
  obs.ego_index = ego;
  obs.obstacles = scenario.obstacles;
  for (int j = 0; j < scenario.agent_count(); ++j) {
    const AgentState& xj = world[static_cast<size_t>(j)];
    if (j != ego) {
      const Eigen::Vector2d to_j = xj.position() - ego_pos;
      const bool behind = heading.dot(to_j) < 0.0;
      if (behind && to_j.norm() > sensing) continue;
      bool occluded = false;
      for (const auto& o : scenario.obstacles) {
        if (o.blocks_segment(ego_pos, xj.position())) {
          occluded = true;
          break;
        }
      }
      if (occluded) continue;
    }
    obs.agents.push_back({j, xj, scenario.params[static_cast<size_t>(j)].goal});
  }
  return obs;
}

GameSpec build_imagined_game(const Observation& obs, const AgentParams& ego_params,
                             const GameBuildConfig& cfg) {
  if (obs.agents.empty()) throw std::invalid_argument("build_imagined_game: empty observation");

  GameSpec spec;
  const int n = static_cast<int>(obs.agents.size());
  spec.agents.reserve(static_cast<size_t>(n));
  for (const auto& a : obs.agents) {
    AgentParams p = ego_params;  // assume-same: everyone plays with the ego's parameters
    p.goal = a.goal;
    spec.agents.push_back(p);
  }
  spec.d_safe = Eigen::MatrixXd::Constant(n, n, ego_params.safety_radius);
  spec.obstacles = obs.obstacles;
  spec.horizon = cfg.horizon;
  spec.ts = cfg.ts;
  spec.obstacle_weight = cfg.obstacle_weight;
  spec.box_weight = cfg.box_weight;
  return spec;
}

GameSpec centralized_game(const Scenario& scenario, const GameBuildConfig& cfg) {
  GameSpec spec;
  spec.agents = scenario.params;
  const int n = scenario.agent_count();
  spec.d_safe.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      spec.d_safe(i, j) = std::max(scenario.params[static_cast<size_t>(i)].safety_radius,
                                   scenario.params[static_cast<size_t>(j)].safety_radius);
    }
  }
  spec.obstacles = scenario.obstacles;
  spec.horizon = cfg.horizon;
  spec.ts = cfg.ts;
  spec.obstacle_weight = cfg.obstacle_weight;
  spec.box_weight = cfg.box_weight;
  return spec;
}

std::vector<Eigen::VectorXd> PlanCache::initial_controls(const std::vector<int>& agent_ids,
                                                         int horizon) const {
  const int n = static_cast<int>(agent_ids.size());
  std::vector<Eigen::VectorXd> init(static_cast<size_t>(horizon),
                                    Eigen::VectorXd::Zero(2 * n));
  for (int slot = 0; slot < n; ++slot) {
    const auto it = per_agent_.find(agent_ids[static_cast<size_t>(slot)]);
    if (it == per_agent_.end()) continue;  // newly observed: stays zero
    const auto& seq = it->second;
    if (seq.empty()) continue;
    for (int k = 0; k < horizon; ++k) {
      // Shift by one step, repeating the final control.
      const size_t src = std::min(static_cast<size_t>(k) + 1, seq.size() - 1);
      init[static_cast<size_t>(k)].segment<2>(2 * slot) = seq[src].vec();
    }
  }
  return init;
}

void PlanCache::store(const std::vector<int>& agent_ids,
                      const std::vector<Eigen::VectorXd>& controls) {
  per_agent_.clear();
  for (size_t slot = 0; slot < agent_ids.size(); ++slot) {
    std::vector<ControlInput> seq;
    seq.reserve(controls.size());
    for (const auto& uk : controls) {
      seq.push_back(ControlInput::from_vec(uk.segment<2>(2 * static_cast<int>(slot))));
    }
    per_agent_[agent_ids[slot]] = std::move(seq);
  }
}

}  // namespace ipg
