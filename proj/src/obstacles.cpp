#include "ipg/obstacles.hpp"

#include <algorithm>
#include <cmath>

namespace ipg {

Obstacle Obstacle::circle(const Eigen::Vector2d& center, double radius, double margin) {
  Obstacle o;
  o.kind = Kind::Circle;
  o.center = center;
  o.radius = radius;
  o.margin = margin;
  return o;
}

Obstacle Obstacle::rect(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi, double margin) {
  Obstacle o;
  o.kind = Kind::Rect;
  o.rect_min = lo;
  o.rect_max = hi;
  o.margin = margin;
  return o;
}

double Obstacle::signed_distance(const Eigen::Vector2d& p) const {
  if (kind == Kind::Circle) {
    return (p - center).norm() - radius;
  }
  const double dx = std::max(rect_min.x() - p.x(), p.x() - rect_max.x());
  const double dy = std::max(rect_min.y() - p.y(), p.y() - rect_max.y());
  if (dx > 0.0 || dy > 0.0) {
    const double ox = std::max(dx, 0.0);
    const double oy = std::max(dy, 0.0);
    return std::hypot(ox, oy);
  }
  return std::max(dx, dy);  // inside: negative depth along the closest face
}

Eigen::Vector2d Obstacle::distance_gradient(const Eigen::Vector2d& p) const {
  if (kind == Kind::Circle) {
    const Eigen::Vector2d d = p - center;
    const double n = d.norm();
    if (n < 1e-12) return {1.0, 0.0};  // degenerate center hit, pick a fixed direction
    return d / n;
  }
  const double dx = std::max(rect_min.x() - p.x(), p.x() - rect_max.x());
  const double dy = std::max(rect_min.y() - p.y(), p.y() - rect_max.y());
  if (dx > 0.0 || dy > 0.0) {
    const Eigen::Vector2d nearest(std::clamp(p.x(), rect_min.x(), rect_max.x()),
                                  std::clamp(p.y(), rect_min.y(), rect_max.y()));
    const Eigen::Vector2d d = p - nearest;
    const double n = d.norm();
    if (n < 1e-12) return {1.0, 0.0};
    return d / n;
  }
  // Inside: move along the axis of the closest face. Ties resolve to x.
  const Eigen::Vector2d mid = 0.5 * (rect_min + rect_max);
  if (dx >= dy) return {p.x() >= mid.x() ? 1.0 : -1.0, 0.0};
  return {0.0, p.y() >= mid.y() ? 1.0 : -1.0};
}

namespace {

// Closest distance from segment [a, b] to point c.
double segment_point_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                              const Eigen::Vector2d& c) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 < 1e-24) return (c - a).norm();
  const double t = std::clamp((c - a).dot(ab) / len2, 0.0, 1.0);
  return (a + t * ab - c).norm();
}

}  // namespace

bool Obstacle::blocks_segment(const Eigen::Vector2d& a_in, const Eigen::Vector2d& b_in) const {
  // Canonical endpoint order so the test is exactly symmetric.
  const bool swap =
      (b_in.x() < a_in.x()) || (b_in.x() == a_in.x() && b_in.y() < a_in.y());
  const Eigen::Vector2d a = swap ? b_in : a_in;
  const Eigen::Vector2d b = swap ? a_in : b_in;

  constexpr double kEps = 1e-12;
  if (kind == Kind::Circle) {
    return segment_point_distance(a, b, center) < radius - kEps;
  }

  // Slab clipping against the open box; grazing along a face does not count.
  const Eigen::Vector2d d = b - a;
  double tlo = 0.0, thi = 1.0;
  for (int axis = 0; axis < 2; ++axis) {
    const double lo = rect_min[axis], hi = rect_max[axis];
    if (std::abs(d[axis]) < kEps) {
      if (a[axis] <= lo + kEps || a[axis] >= hi - kEps) return false;
      continue;
    }
    double t0 = (lo - a[axis]) / d[axis];
    double t1 = (hi - a[axis]) / d[axis];
    if (t0 > t1) std::swap(t0, t1);
    tlo = std::max(tlo, t0);
    thi = std::min(thi, t1);
    if (tlo >= thi) return false;
  }
  return thi - tlo > kEps;
}

}  // namespace ipg
