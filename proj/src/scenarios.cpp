#include "ipg/scenarios.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ipg {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // Raw-bits construction keeps the stream identical across standard
  // libraries, unlike std::uniform_real_distribution.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double heading_towards(const Eigen::Vector2d& from, const Eigen::Vector2d& to) {
  return std::atan2(to.y() - from.y(), to.x() - from.x());
}

void check(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("scenario invariant violated: " + what);
}

}  // namespace

void validate(const Scenario& scenario, double contact_radius) {
  const int n = scenario.agent_count();
  check(static_cast<int>(scenario.initial_states.size()) == n, "state/param count mismatch");
  for (int i = 0; i < n; ++i) {
    const auto& x = scenario.initial_states[static_cast<size_t>(i)];
    const auto& p = scenario.params[static_cast<size_t>(i)];
    check(x.finite(), "non-finite initial state");
    check((p.state_weight.array() >= 0).all() && (p.input_weight.array() >= 0).all(),
          "negative cost weight");
    check(p.safety_weight >= 0 && p.backup_weight >= 0, "negative cost weight");
    check(p.safety_radius > 0, "non-positive safety radius");
    check(p.sensing_range > 0, "non-positive sensing range");
    check(scenario.workspace.contains(p.goal), "goal outside workspace");
    for (const auto& obs : scenario.obstacles) {
      check(obs.signed_distance(x.position()) >= 0, "initial state inside obstacle");
      check(obs.signed_distance(p.goal) >= 0, "goal inside obstacle");
    }
    for (int j = i + 1; j < n; ++j) {
      const double d =
          (x.position() - scenario.initial_states[static_cast<size_t>(j)].position()).norm();
      check(d >= contact_radius, "initial states in contact");
    }
  }
  for (const auto& obs : scenario.obstacles) {
    if (obs.kind == Obstacle::Kind::Circle) {
      check(obs.radius > 0, "degenerate circle obstacle");
    } else {
      check(obs.rect_max.x() > obs.rect_min.x() && obs.rect_max.y() > obs.rect_min.y(),
            "degenerate rectangle obstacle");
    }
  }
}

NarrowWayGeometry make_narrow_way(double width, double length, double room_depth) {
  NarrowWayGeometry g;
  g.width = width;
  g.length = length;
  g.room_depth = room_depth;

  const double half_len = length / 2.0;
  const double room_half_h = room_depth / 2.0;
  if (width >= room_depth) throw std::invalid_argument("corridor must be narrower than the rooms");

  g.walls = {
      Obstacle::rect({-half_len, width / 2.0}, {half_len, room_half_h}),
      Obstacle::rect({-half_len, -room_half_h}, {half_len, -width / 2.0}),
  };
  g.workspace = {{-half_len - room_depth, -room_half_h}, {half_len + room_depth, room_half_h}};
  g.left_room = {{-half_len - room_depth, -room_half_h}, {-half_len, room_half_h}};
  g.right_room = {{half_len, -room_half_h}, {half_len + room_depth, room_half_h}};
  return g;
}

TIntersectionGeometry make_t_intersection(double width, double arm_length, double stem_length) {
  TIntersectionGeometry g;
  g.width = width;
  g.arm_length = arm_length;
  g.stem_length = stem_length;

  const double hw = width / 2.0;
  g.walls = {
      Obstacle::rect({-arm_length, hw}, {arm_length, hw + 1.0}),
      Obstacle::rect({-arm_length, -stem_length}, {-hw, -hw}),
      Obstacle::rect({hw, -stem_length}, {arm_length, -hw}),
  };
  g.workspace = {{-arm_length, -stem_length}, {arm_length, hw + 1.0}};
  return g;
}

Scenario make_narrow_way_scenario(double r_left, double r_right) {
  const auto g = make_narrow_way();
  Scenario s;
  s.name = "narrow_way";
  s.obstacles = g.walls;
  s.workspace = g.workspace;

  AgentParams left;
  left.goal = {g.length / 2.0 + g.room_depth / 2.0, 0.0};
  left.safety_radius = r_left;
  AgentParams right;
  right.goal = {-g.length / 2.0 - g.room_depth / 2.0, 0.0};
  right.safety_radius = r_right;

  s.params = {left, right};
  s.initial_states = {
      {-g.length / 2.0 - g.room_depth / 2.0, 0.0, 0.0, 0.0},
      {g.length / 2.0 + g.room_depth / 2.0, 0.0, M_PI, 0.0},
  };
  validate(s);
  return s;
}

Scenario make_t_intersection_scenario() {
  const auto g = make_t_intersection();
  Scenario s;
  s.name = "t_intersection";
  s.obstacles = g.walls;
  s.workspace = g.workspace;

  // Agent 0 crosses the bar left to right; agent 1 climbs the stem and turns
  // into the left arm. Their paths conflict around the junction.
  AgentParams bar_agent;
  bar_agent.goal = {g.arm_length - 0.8, 0.0};
  bar_agent.safety_radius = 1.2;
  AgentParams stem_agent;
  stem_agent.goal = {-g.arm_length + 0.8, 0.0};
  stem_agent.safety_radius = 1.5;

  s.params = {bar_agent, stem_agent};
  s.initial_states = {
      {-g.arm_length + 0.8, 0.0, 0.0, 0.0},
      {0.0, -g.stem_length + 0.8, M_PI / 2.0, 0.0},
  };
  validate(s);
  return s;
}

Scenario make_open_area(int n_agents, const std::vector<double>& radii, double circle_radius) {
  if (n_agents < 1) throw std::invalid_argument("make_open_area: need at least one agent");
  if (static_cast<int>(radii.size()) != n_agents) {
    throw std::invalid_argument("make_open_area: one safety radius per agent");
  }
  Scenario s;
  s.name = "open_area";
  const double extent = circle_radius + 2.0;
  s.workspace = {{-extent, -extent}, {extent, extent}};

  for (int i = 0; i < n_agents; ++i) {
    const double angle = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n_agents);
    const Eigen::Vector2d start{circle_radius * std::cos(angle), circle_radius * std::sin(angle)};
    AgentParams p;
    p.goal = -start;
    p.safety_radius = radii[static_cast<size_t>(i)];
    s.params.push_back(p);
    s.initial_states.push_back({start.x(), start.y(), heading_towards(start, p.goal), 0.0});
  }
  validate(s);
  return s;
}

std::vector<Scenario> random_narrow_way_suite(int n_cases, std::uint64_t seed) {
  if (n_cases < 1) throw std::invalid_argument("random_narrow_way_suite: n_cases must be >= 1");
  const auto g = make_narrow_way();
  std::mt19937_64 rng(seed);

  const double clearance = 0.6;  // from room edges and wall faces
  const auto sample_in = [&](const Workspace& room) {
    return Eigen::Vector2d{uniform(rng, room.min.x() + clearance, room.max.x() - clearance),
                           uniform(rng, room.min.y() + clearance, room.max.y() - clearance)};
  };

  std::vector<Scenario> suite;
  suite.reserve(static_cast<size_t>(n_cases));
  for (int c = 0; c < n_cases; ++c) {
    Scenario s;
    s.name = "narrow_way_rand_" + std::to_string(c);
    s.obstacles = g.walls;
    s.workspace = g.workspace;
    s.sampling_ranges = {
        {"safety_radius", {1.2, 2.0}},
        {"safety_weight", {20.0, 60.0}},
        {"backup_weight", {5.0, 15.0}},
        {"state_weight_pos", {0.005, 0.015}},
    };

    for (int i = 0; i < 2; ++i) {
      const Workspace& start_room = (i == 0) ? g.left_room : g.right_room;
      const Workspace& goal_room = (i == 0) ? g.right_room : g.left_room;
      const Eigen::Vector2d start = sample_in(start_room);
      const Eigen::Vector2d goal = sample_in(goal_room);

      AgentParams p;
      p.goal = goal;
      p.safety_radius = uniform(rng, 1.2, 2.0);
      p.safety_weight = uniform(rng, 20.0, 60.0);
      p.backup_weight = uniform(rng, 5.0, 15.0);
      const double qpos = uniform(rng, 0.005, 0.015);
      p.state_weight = {qpos, qpos, 0.0, 0.0};

      s.params.push_back(p);
      s.initial_states.push_back({start.x(), start.y(), heading_towards(start, goal), 0.0});
    }
    validate(s);
    suite.push_back(std::move(s));
  }
  return suite;
}

}  // namespace ipg
