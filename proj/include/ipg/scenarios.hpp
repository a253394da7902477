#pragma once

#include "ipg/obstacles.hpp"
#include "ipg/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ipg {

struct Workspace {
  Eigen::Vector2d min{0.0, 0.0};
  Eigen::Vector2d max{0.0, 0.0};

  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
};

struct Scenario {
  std::string name;
  std::vector<Obstacle> obstacles;
  std::vector<AgentState> initial_states;
  std::vector<AgentParams> params;
  Workspace workspace;
  // Sampling ranges used when the scenario was generated, recorded for
  // reproducibility ("key" -> [lo, hi]).
  std::map<std::string, std::pair<double, double>> sampling_ranges;

  int agent_count() const { return static_cast<int>(params.size()); }
};

// Throws std::invalid_argument when a scenario violates its construction
// invariants: initial states pairwise at least `contact_radius` apart and
// clear of obstacles, goals inside the workspace and clear of obstacles.
void validate(const Scenario& scenario, double contact_radius = 0.5);

// Two wall rectangles forming a corridor between two open rooms, rooms
// centered on the corridor axis.
struct NarrowWayGeometry {
  std::vector<Obstacle> walls;  // exactly two rectangles
  Workspace workspace;
  Workspace left_room;
  Workspace right_room;
  double width = 2.0;
  double length = 6.0;
  double room_depth = 4.0;
};
NarrowWayGeometry make_narrow_way(double width = 2.0, double length = 6.0,
                                  double room_depth = 4.0);

// Horizontal corridor joined by a vertical stem from below; the two filled
// lower quadrants occlude the arms from each other away from the junction.
struct TIntersectionGeometry {
  std::vector<Obstacle> walls;
  Workspace workspace;
  double width = 2.0;       // corridor half-gap is width/2
  double arm_length = 6.0;  // horizontal extent each side of the junction
  double stem_length = 6.0;
};
TIntersectionGeometry make_t_intersection(double width = 2.0, double arm_length = 6.0,
                                          double stem_length = 6.0);

// Canonical two-agent hallway encounter with default parameters.
Scenario make_narrow_way_scenario(double r_left = 1.2, double r_right = 1.5);

// One agent crossing the bar, one turning out of the stem into the bar.
Scenario make_t_intersection_scenario();

// Obstacle-free workspace; agents on a circle with antipodal goals.
Scenario make_open_area(int n_agents, const std::vector<double>& radii,
                        double circle_radius = 4.0);

// Seeded randomized hallway suite: agent 0 crosses left room -> right room,
// agent 1 the reverse; safety radii uniform in [1.2, 2.0], weight scales
// within +/-50% of their defaults.
std::vector<Scenario> random_narrow_way_suite(int n_cases, std::uint64_t seed);

}  // namespace ipg
