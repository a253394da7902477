#pragma once

#include <Eigen/Dense>

namespace ipg {

// Static obstacle: circle or axis-aligned rectangle. The signed distance is
// measured to the obstacle surface (negative inside); `margin` is the soft
// clearance at which avoidance penalties activate.
struct Obstacle {
  enum class Kind { Circle, Rect };

  Kind kind = Kind::Circle;
  Eigen::Vector2d center{0.0, 0.0};
  double radius = 0.0;
  Eigen::Vector2d rect_min{0.0, 0.0};
  Eigen::Vector2d rect_max{0.0, 0.0};
  double margin = 0.3;

  static Obstacle circle(const Eigen::Vector2d& center, double radius, double margin = 0.3);
  static Obstacle rect(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi, double margin = 0.3);

  double signed_distance(const Eigen::Vector2d& p) const;
  // Unit direction of increasing signed distance, nearest-point based at
  // rectangle corners and in the interior.
  Eigen::Vector2d distance_gradient(const Eigen::Vector2d& p) const;
  // True when the open segment (a, b) passes through the obstacle interior.
  // Symmetric in its endpoints by construction.
  bool blocks_segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b) const;
};

}  // namespace ipg
