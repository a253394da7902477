#pragma once

#include "ipg/costs.hpp"
#include "ipg/scenarios.hpp"
#include "ipg/types.hpp"

#include <map>
#include <vector>

namespace ipg {

struct ObservedAgent {
  int index = 0;  // scenario agent index
  AgentState state;
  Eigen::Vector2d goal{0.0, 0.0};
};

// What one agent can see of the world: itself plus every agent that is
// neither occluded nor behind it beyond its sensing range. Entries are in
// ascending scenario-index order.
struct Observation {
  int ego_index = 0;
  std::vector<ObservedAgent> agents;
  std::vector<Obstacle> obstacles;

  int ego_slot() const;  // position of the ego within `agents`
  std::vector<int> agent_ids() const;
  JointState states() const;
};

// Filters the world through agent `ego`'s sensing model: agent j is seen iff
// the open ego-j segment crosses no obstacle and j is not simultaneously
// behind the ego and farther than its sensing range.
Observation observe(const JointState& world, int ego, const Scenario& scenario);

// Shared knobs for assembling a GameSpec (horizon, timing, penalty weights).
struct GameBuildConfig {
  int horizon = 30;
  double ts = 0.1;
  double obstacle_weight = 100.0;
  double box_weight = 100.0;
};

// The ego's imagined game: every observed agent gets the ego's interaction
// parameters, every pairwise safety distance is the ego's own radius, and
// goals come from the observation.
GameSpec build_imagined_game(const Observation& obs, const AgentParams& ego_params,
                             const GameBuildConfig& cfg = {});

// Ground-truth game over all agents; pairwise safety distance is the larger
// of the two agents' radii.
GameSpec centralized_game(const Scenario& scenario, const GameBuildConfig& cfg = {});

// Receding-horizon warm start. Stores the latest solved control sequence per
// scenario agent; retrieval shifts each stored sequence by one step (last
// entry repeated) and zero-fills agents that have no stored plan.
class PlanCache {
 public:
  std::vector<Eigen::VectorXd> initial_controls(const std::vector<int>& agent_ids,
                                                int horizon) const;
  void store(const std::vector<int>& agent_ids, const std::vector<Eigen::VectorXd>& controls);
  void clear() { per_agent_.clear(); }

 private:
  std::map<int, std::vector<ControlInput>> per_agent_;
};

}  // namespace ipg
