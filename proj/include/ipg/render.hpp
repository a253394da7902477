#pragma once

#include "ipg/policies.hpp"
#include "ipg/scenarios.hpp"
#include "ipg/types.hpp"

#include <string>
#include <vector>

namespace ipg {

// One frame of a run at step `history.size() - 1`: obstacles, goals, past
// trajectories as solid polylines, each agent's current plan for itself as a
// dark dashed line and its predictions of others as light dashed lines, and
// the safety circles around current positions.
std::string render_frame_svg(const Scenario& scenario, const std::vector<JointState>& history,
                             const std::vector<AgentDecision>& decisions, double px_per_meter = 60.0);

}  // namespace ipg
