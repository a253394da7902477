#include "ipg/sim.hpp"

#include "ipg/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>

namespace ipg {

const char* outcome_name(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Success: return "success";
    case OutcomeKind::Collision: return "collision";
    case OutcomeKind::Deadlock: return "deadlock";
  }
  return "unknown";
}

namespace {

bool agent_at_goal(const AgentState& x, const AgentParams& p, const SimConfig& cfg) {
  return (x.position() - p.goal).norm() <= cfg.goal_tolerance &&
         std::abs(x.v) < cfg.arrival_speed;
}

void latch_arrivals(const JointState& state, const Scenario& scenario, const SimConfig& cfg,
                    int step, std::vector<bool>& arrived, std::vector<int>& arrival_step) {
  for (size_t i = 0; i < state.size(); ++i) {
    if (!arrived[i] && agent_at_goal(state[i], scenario.params[i], cfg)) {
      arrived[i] = true;
      arrival_step[i] = step;
    }
  }
}

bool state_in_collision(const JointState& state, const Scenario& scenario,
                        const SimConfig& cfg) {
  for (size_t i = 0; i < state.size(); ++i) {
    const Eigen::Vector2d pi = state[i].position();
    for (const auto& obs : scenario.obstacles) {
      if (obs.signed_distance(pi) < 0.0) return true;
    }
    for (size_t j = i + 1; j < state.size(); ++j) {
      if ((pi - state[j].position()).norm() < cfg.contact_radius) return true;
    }
  }
  return false;
}

// Synchronous advance: arrived agents freeze (speed zeroed on the latch
// transition), everyone else takes one dynamics step.
JointState advance(const JointState& state, const std::vector<ControlInput>& controls,
                   const std::vector<bool>& arrived, const Scenario& scenario,
                   const SimConfig& cfg) {
  JointState next(state.size());
  for (size_t i = 0; i < state.size(); ++i) {
    if (arrived[i]) {
      next[i] = state[i];
      next[i].v = 0.0;
    } else {
      next[i] = step(state[i], controls[i], cfg.ts, scenario.params[i].v_bounds);
    }
  }
  return next;
}

void run_parallel(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> cursor{0};
  std::vector<std::thread> pool;
  const int workers = std::min(threads, n);
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

AgentDecision hold_decision(int agent, const AgentState& x, int horizon) {
  AgentDecision d;
  d.control = {0.0, 0.0};
  d.feasible = true;
  d.converged = true;
  PlannedAgent pa;
  pa.id = agent;
  pa.states.assign(static_cast<size_t>(horizon) + 1, x);
  d.plan = {std::move(pa)};
  return d;
}

}  // namespace

SimTrace run(const Scenario& scenario, const std::vector<PolicyKind>& assignment,
             const SimConfig& cfg) {
  const int n = scenario.agent_count();
  if (static_cast<int>(assignment.size()) != n) {
    throw std::invalid_argument("run: one policy per agent required");
  }
  const bool centralized = assignment[0] == PolicyKind::Centralized;
  for (const auto kind : assignment) {
    if ((kind == PolicyKind::Centralized) != centralized) {
      throw std::invalid_argument("run: centralized policy applies to the whole scenario");
    }
  }

  const PolicyConfig policy_cfg = cfg.policy_cfg();
  std::vector<std::unique_ptr<AgentPolicy>> policies;
  PolicyCache central_cache;
  if (!centralized) {
    policies.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      policies.push_back(std::make_unique<AgentPolicy>(
          assignment[static_cast<size_t>(i)], scenario.params[static_cast<size_t>(i)],
          policy_cfg));
    }
  }

  SimTrace trace;
  trace.states.push_back(scenario.initial_states);
  trace.arrival_step.assign(static_cast<size_t>(n), -1);
  std::vector<bool> arrived(static_cast<size_t>(n), false);

  for (int k = 0;; ++k) {
    const JointState& snapshot = trace.states.back();

    latch_arrivals(snapshot, scenario, cfg, k, arrived, trace.arrival_step);
    if (state_in_collision(snapshot, scenario, cfg)) {
      trace.first_collision_step = k;
      break;
    }
    if (std::all_of(arrived.begin(), arrived.end(), [](bool b) { return b; })) break;
    if (k >= cfg.max_steps) break;

    std::vector<AgentDecision> decisions(static_cast<size_t>(n));
    if (centralized) {
      auto all = centralized_decide(snapshot, scenario, central_cache, policy_cfg);
      for (int i = 0; i < n; ++i) {
        decisions[static_cast<size_t>(i)] =
            arrived[static_cast<size_t>(i)]
                ? hold_decision(i, snapshot[static_cast<size_t>(i)], cfg.solver.horizon)
                : std::move(all[static_cast<size_t>(i)]);
      }
    } else {
      run_parallel(n, cfg.threads, [&](int i) {
        if (arrived[static_cast<size_t>(i)]) {
          decisions[static_cast<size_t>(i)] =
              hold_decision(i, snapshot[static_cast<size_t>(i)], cfg.solver.horizon);
        } else {
          decisions[static_cast<size_t>(i)] =
              policies[static_cast<size_t>(i)]->decide(observe(snapshot, i, scenario));
        }
      });
    }

    std::vector<ControlInput> controls(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      controls[static_cast<size_t>(i)] =
          arrived[static_cast<size_t>(i)] ? ControlInput{0.0, 0.0}
                                          : decisions[static_cast<size_t>(i)].control;
    }

    JointState next = advance(snapshot, controls, arrived, scenario, cfg);
    for (size_t i = 0; i < next.size(); ++i) {
      if (!next[i].finite()) {
        throw std::runtime_error("run: non-finite state for agent " + std::to_string(i) +
                                 " at step " + std::to_string(k + 1));
      }
    }

    trace.decisions.push_back(std::move(decisions));
    trace.controls.push_back(std::move(controls));
    trace.states.push_back(std::move(next));
  }

  trace.outcome = classify(trace, scenario, cfg);
  return trace;
}

Outcome classify(const SimTrace& trace, const Scenario& scenario, const SimConfig& cfg) {
  const int n = scenario.agent_count();
  std::vector<bool> arrived(static_cast<size_t>(n), false);
  std::vector<int> arrival_step(static_cast<size_t>(n), -1);
  int collision_step = -1;

  for (size_t k = 0; k < trace.states.size(); ++k) {
    latch_arrivals(trace.states[k], scenario, cfg, static_cast<int>(k), arrived, arrival_step);
    if (state_in_collision(trace.states[k], scenario, cfg)) {
      collision_step = static_cast<int>(k);
      break;
    }
  }

  Outcome out;
  out.arrival_time_s.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int s = arrival_step[static_cast<size_t>(i)];
    out.arrival_time_s[static_cast<size_t>(i)] = s < 0 ? -1.0 : s * cfg.ts;
  }

  if (collision_step >= 0) {
    out.kind = OutcomeKind::Collision;
    out.total_time_s = collision_step * cfg.ts;
  } else if (std::all_of(arrived.begin(), arrived.end(), [](bool b) { return b; })) {
    out.kind = OutcomeKind::Success;
    out.total_time_s =
        *std::max_element(arrival_step.begin(), arrival_step.end()) * cfg.ts;
  } else {
    out.kind = OutcomeKind::Deadlock;
    out.total_time_s = static_cast<double>(trace.steps()) * cfg.ts;
  }
  return out;
}

std::vector<JointState> replay_states(const Scenario& scenario, const SimConfig& cfg,
                                      const JointState& x0,
                                      const std::vector<std::vector<ControlInput>>& controls) {
  std::vector<JointState> states{x0};
  std::vector<bool> arrived(x0.size(), false);
  std::vector<int> arrival_step(x0.size(), -1);
  for (size_t k = 0; k < controls.size(); ++k) {
    latch_arrivals(states.back(), scenario, cfg, static_cast<int>(k), arrived, arrival_step);
    states.push_back(advance(states.back(), controls[k], arrived, scenario, cfg));
  }
  return states;
}

}  // namespace ipg
