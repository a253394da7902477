#include "ipg/policies.hpp"

#include "ipg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ipg {

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::IPG: return "ipg";
    case PolicyKind::Vanilla: return "vanilla";
    case PolicyKind::Brake: return "brake";
    case PolicyKind::Ignore: return "ignore";
    case PolicyKind::Centralized: return "centralized";
  }
  return "unknown";
}

bool parse_policy(const std::string& name, PolicyKind& out) {
  for (PolicyKind k : {PolicyKind::IPG, PolicyKind::Vanilla, PolicyKind::Brake, PolicyKind::Ignore,
                       PolicyKind::Centralized}) {
    if (name == policy_name(k)) {
      out = k;
      return true;
    }
  }
  return false;
}

std::vector<AgentState> constant_velocity_prediction(const AgentState& x, int horizon, double ts) {
  // Zero-control propagation with the speed clamp disabled: heading and
  // speed hold, position advances.
  const Interval unbounded{-1e18, 1e18};
  std::vector<AgentState> out;
  out.reserve(static_cast<size_t>(horizon) + 1);
  out.push_back(x);
  for (int k = 0; k < horizon; ++k) out.push_back(step(out.back(), {0.0, 0.0}, ts, unbounded));
  return out;
}

namespace {

std::vector<PlannedAgent> plan_for_trace(const JointPlan& plan, const std::vector<int>& ids) {
  std::vector<PlannedAgent> out;
  out.reserve(ids.size());
  for (int slot = 0; slot < static_cast<int>(ids.size()); ++slot) {
    PlannedAgent pa;
    pa.id = ids[static_cast<size_t>(slot)];
    pa.states.reserve(plan.states.size());
    for (int k = 0; k < static_cast<int>(plan.states.size()); ++k) {
      pa.states.push_back(plan.agent_state(k, slot));
    }
    out.push_back(std::move(pa));
  }
  return out;
}

Observation ego_only(const Observation& obs) {
  Observation solo;
  solo.ego_index = obs.ego_index;
  solo.obstacles = obs.obstacles;
  solo.agents = {obs.agents[static_cast<size_t>(obs.ego_slot())]};
  return solo;
}

struct SingleAgentSolve {
  JointPlan plan;
  std::vector<PlannedAgent> trace;  // ego plan followed by ghost forecasts
};

// Shared core of the vanilla/brake/ignore policies: plan for the ego alone,
// optionally treating everyone else as a constant-velocity ghost.
SingleAgentSolve solve_single_agent(const Observation& obs, const AgentParams& ego_params,
                                    PolicyCache& cache, const PolicyConfig& cfg,
                                    bool with_ghosts) {
  const Observation solo = ego_only(obs);
  GameSpec spec = build_imagined_game(solo, ego_params, cfg.build_cfg());

  std::vector<std::vector<AgentState>> forecasts;
  std::vector<int> forecast_ids;
  if (with_ghosts) {
    for (const auto& a : obs.agents) {
      if (a.index == obs.ego_index) continue;
      auto predicted = constant_velocity_prediction(a.state, spec.horizon, spec.ts);
      Ghost g;
      g.positions.reserve(predicted.size());
      for (const auto& s : predicted) g.positions.push_back(s.position());
      g.d_safe = ego_params.safety_radius;
      g.weight = ego_params.safety_weight;
      spec.ghosts.push_back(std::move(g));
      forecasts.push_back(std::move(predicted));
      forecast_ids.push_back(a.index);
    }
  }

  SingleAgentSolve out;
  const std::vector<int> ids{obs.ego_index};
  out.plan = solve(solo.states(), spec, cache.plans.initial_controls(ids, spec.horizon),
                   cfg.solver);
  cache.plans.store(ids, out.plan.controls);

  out.trace = plan_for_trace(out.plan, ids);
  for (size_t m = 0; m < forecasts.size(); ++m) {
    out.trace.push_back({forecast_ids[m], std::move(forecasts[m])});
  }
  return out;
}

// A plan is collision-free when its own rollout keeps contact distance to
// every forecast at matching steps and never penetrates an obstacle.
bool plan_is_feasible(const JointPlan& plan, const std::vector<PlannedAgent>& trace,
                      const std::vector<Obstacle>& obstacles, double contact_radius) {
  const size_t steps = plan.states.size();
  for (size_t k = 0; k < steps; ++k) {
    const Eigen::Vector2d pos = plan.agent_state(static_cast<int>(k), 0).position();
    for (const auto& obs : obstacles) {
      if (obs.signed_distance(pos) < 0.0) return false;
    }
    for (size_t m = 1; m < trace.size(); ++m) {  // slot 0 is the ego itself
      const auto& fs = trace[m].states;
      const Eigen::Vector2d other = fs[std::min(k, fs.size() - 1)].position();
      if ((pos - other).norm() < contact_radius) return false;
    }
  }
  return true;
}

std::vector<ControlInput> shifted(const std::vector<ControlInput>& seq) {
  std::vector<ControlInput> out;
  out.reserve(seq.size());
  for (size_t k = 0; k + 1 < seq.size(); ++k) out.push_back(seq[k + 1]);
  if (!seq.empty()) out.push_back(seq.back());
  return out;
}

std::vector<PlannedAgent> rollout_trace(int ego_id, const AgentState& x0,
                                        const std::vector<ControlInput>& controls,
                                        const AgentParams& params, double ts) {
  PlannedAgent pa;
  pa.id = ego_id;
  pa.states.reserve(controls.size() + 1);
  pa.states.push_back(x0);
  for (const auto& u : controls) pa.states.push_back(step(pa.states.back(), u, ts, params.v_bounds));
  return {std::move(pa)};
}

}  // namespace

AgentDecision ipg_decide(const Observation& obs, const AgentParams& ego_params, PolicyCache& cache,
                         const PolicyConfig& cfg) {
  const GameSpec spec = build_imagined_game(obs, ego_params, cfg.build_cfg());
  const std::vector<int> ids = obs.agent_ids();

  const JointPlan plan =
      solve(obs.states(), spec, cache.plans.initial_controls(ids, spec.horizon), cfg.solver);
  cache.plans.store(ids, plan.controls);

  AgentDecision d;
  d.control = plan.agent_control(0, obs.ego_slot());
  d.feasible = true;
  d.converged = plan.converged;
  d.plan_cost = plan.cost;
  d.plan = plan_for_trace(plan, ids);
  return d;
}

AgentDecision vanilla_decide(const Observation& obs, const AgentParams& ego_params,
                             PolicyCache& cache, const PolicyConfig& cfg) {
  SingleAgentSolve solved = solve_single_agent(obs, ego_params, cache, cfg, true);

  AgentDecision d;
  d.converged = solved.plan.converged;
  d.plan_cost = solved.plan.cost;

  if (plan_is_feasible(solved.plan, solved.trace, obs.obstacles, cfg.contact_radius)) {
    d.feasible = true;
    d.control = solved.plan.agent_control(0, 0);
    d.plan = std::move(solved.trace);
    cache.committed.clear();
    for (size_t k = 0; k < solved.plan.controls.size(); ++k) {
      cache.committed.push_back(solved.plan.agent_control(static_cast<int>(k), 0));
    }
    cache.has_committed = true;
    return d;
  }

  d.feasible = false;
  const AgentState ego_state = obs.agents[static_cast<size_t>(obs.ego_slot())].state;
  if (cache.has_committed) {
    cache.committed = shifted(cache.committed);
    d.control = ego_params.u_bounds.clamp(cache.committed.front());
    d.plan = rollout_trace(obs.ego_index, ego_state, cache.committed, ego_params, cfg.ts);
  } else {
    d.control = ego_params.u_bounds.clamp({0.0, 0.0});
    d.plan = rollout_trace(obs.ego_index, ego_state, {}, ego_params, cfg.ts);
  }
  // Keep the forecasts visible in the trace even when following an old plan.
  for (size_t m = 1; m < solved.trace.size(); ++m) d.plan.push_back(std::move(solved.trace[m]));
  return d;
}

AgentDecision brake_decide(const Observation& obs, const AgentParams& ego_params,
                           PolicyCache& cache, const PolicyConfig& cfg) {
  SingleAgentSolve solved = solve_single_agent(obs, ego_params, cache, cfg, true);

  AgentDecision d;
  d.converged = solved.plan.converged;
  d.plan_cost = solved.plan.cost;

  if (plan_is_feasible(solved.plan, solved.trace, obs.obstacles, cfg.contact_radius)) {
    d.feasible = true;
    d.control = solved.plan.agent_control(0, 0);
    d.plan = std::move(solved.trace);
    cache.committed.clear();
    for (size_t k = 0; k < solved.plan.controls.size(); ++k) {
      cache.committed.push_back(solved.plan.agent_control(static_cast<int>(k), 0));
    }
    cache.has_committed = true;
    return d;
  }

  // Maximal deceleration toward standstill.
  const AgentState ego_state = obs.agents[static_cast<size_t>(obs.ego_slot())].state;
  d.feasible = false;
  d.control = ego_params.u_bounds.clamp({-ego_state.v / cfg.ts, 0.0});
  d.plan = std::move(solved.trace);
  return d;
}

AgentDecision ignore_decide(const Observation& obs, const AgentParams& ego_params,
                            PolicyCache& cache, const PolicyConfig& cfg) {
  SingleAgentSolve solved = solve_single_agent(obs, ego_params, cache, cfg, false);
  AgentDecision d;
  d.feasible = true;
  d.converged = solved.plan.converged;
  d.plan_cost = solved.plan.cost;
  d.control = solved.plan.agent_control(0, 0);
  d.plan = std::move(solved.trace);
  return d;
}

std::vector<AgentDecision> centralized_decide(const JointState& world, const Scenario& scenario,
                                              PolicyCache& cache, const PolicyConfig& cfg) {
  const GameSpec spec = centralized_game(scenario, cfg.build_cfg());
  std::vector<int> ids(static_cast<size_t>(scenario.agent_count()));
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);

  const JointPlan plan =
      solve(world, spec, cache.plans.initial_controls(ids, spec.horizon), cfg.solver);
  cache.plans.store(ids, plan.controls);

  const std::vector<PlannedAgent> trace = plan_for_trace(plan, ids);
  std::vector<AgentDecision> out(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    out[i].control = plan.agent_control(0, static_cast<int>(i));
    out[i].feasible = true;
    out[i].converged = plan.converged;
    out[i].plan_cost = plan.cost;
    out[i].plan = trace;
  }
  return out;
}

AgentPolicy::AgentPolicy(PolicyKind kind, AgentParams params, PolicyConfig cfg)
    : kind_(kind), params_(std::move(params)), cfg_(std::move(cfg)) {
  if (kind_ == PolicyKind::Centralized) {
    throw std::invalid_argument("centralized policy is scenario-wide, not per-agent");
  }
}

AgentDecision AgentPolicy::decide(const Observation& obs) {
  switch (kind_) {
    case PolicyKind::IPG: return ipg_decide(obs, params_, cache_, cfg_);
    case PolicyKind::Vanilla: return vanilla_decide(obs, params_, cache_, cfg_);
    case PolicyKind::Brake: return brake_decide(obs, params_, cache_, cfg_);
    case PolicyKind::Ignore: return ignore_decide(obs, params_, cache_, cfg_);
    case PolicyKind::Centralized: break;
  }
  throw std::logic_error("unreachable policy kind");
}

}  // namespace ipg
