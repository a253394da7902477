#include "ipg/render.hpp"

#include <cstdio>
#include <sstream>

namespace ipg {

namespace {

const char* kPalette[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd",
                          "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

const char* agent_color(int i) { return kPalette[static_cast<size_t>(i) % 8]; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string render_frame_svg(const Scenario& scenario, const std::vector<JointState>& history,
                             const std::vector<AgentDecision>& decisions, double px_per_meter) {
  const double pad = 1.0;
  const Eigen::Vector2d lo = scenario.workspace.min - Eigen::Vector2d{pad, pad};
  const Eigen::Vector2d hi = scenario.workspace.max + Eigen::Vector2d{pad, pad};
  const double w = (hi.x() - lo.x()) * px_per_meter;
  const double h = (hi.y() - lo.y()) * px_per_meter;

  // World y grows up, SVG y grows down.
  const auto X = [&](double x) { return (x - lo.x()) * px_per_meter; };
  const auto Y = [&](double y) { return (hi.y() - y) * px_per_meter; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\""
      << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << ' ' << fmt(h) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
      << "\" fill=\"#ffffff\"/>\n";

  for (const auto& o : scenario.obstacles) {
    if (o.kind == Obstacle::Kind::Rect) {
      svg << "<rect class=\"obstacle\" x=\"" << fmt(X(o.rect_min.x())) << "\" y=\""
          << fmt(Y(o.rect_max.y())) << "\" width=\""
          << fmt((o.rect_max.x() - o.rect_min.x()) * px_per_meter) << "\" height=\""
          << fmt((o.rect_max.y() - o.rect_min.y()) * px_per_meter)
          << "\" fill=\"#555555\"/>\n";
    } else {
      svg << "<circle class=\"obstacle\" cx=\"" << fmt(X(o.center.x())) << "\" cy=\""
          << fmt(Y(o.center.y())) << "\" r=\"" << fmt(o.radius * px_per_meter)
          << "\" fill=\"#555555\"/>\n";
    }
  }

  const int n = scenario.agent_count();
  for (int i = 0; i < n; ++i) {
    const auto& goal = scenario.params[static_cast<size_t>(i)].goal;
    svg << "<circle class=\"goal\" cx=\"" << fmt(X(goal.x())) << "\" cy=\"" << fmt(Y(goal.y()))
        << "\" r=\"5\" fill=\"none\" stroke=\"" << agent_color(i)
        << "\" stroke-width=\"1.5\" stroke-dasharray=\"2,2\"/>\n";
  }

  // Plans first so trajectories draw on top. Each ego's own slot is dark,
  // its predictions of others light.
  for (size_t ego = 0; ego < decisions.size(); ++ego) {
    for (const auto& pa : decisions[ego].plan) {
      if (pa.states.empty()) continue;
      const bool own = pa.id == static_cast<int>(ego);
      svg << "<polyline class=\"" << (own ? "plan" : "prediction") << "\" points=\"";
      for (const auto& x : pa.states) svg << fmt(X(x.px)) << ',' << fmt(Y(x.py)) << ' ';
      svg << "\" fill=\"none\" stroke=\"" << agent_color(static_cast<int>(ego))
          << "\" stroke-width=\"" << (own ? "1.6" : "1.1") << "\" stroke-opacity=\""
          << (own ? "0.85" : "0.4") << "\" stroke-dasharray=\"" << (own ? "6,4" : "2,4")
          << "\"/>\n";
    }
  }

  for (int i = 0; i < n; ++i) {
    svg << "<polyline class=\"trajectory\" points=\"";
    for (const auto& state : history) {
      const auto& x = state[static_cast<size_t>(i)];
      svg << fmt(X(x.px)) << ',' << fmt(Y(x.py)) << ' ';
    }
    svg << "\" fill=\"none\" stroke=\"" << agent_color(i) << "\" stroke-width=\"2.2\"/>\n";
  }

  const JointState& current = history.back();
  for (int i = 0; i < n; ++i) {
    const auto& x = current[static_cast<size_t>(i)];
    const double r = scenario.params[static_cast<size_t>(i)].safety_radius;
    svg << "<circle class=\"safety\" cx=\"" << fmt(X(x.px)) << "\" cy=\"" << fmt(Y(x.py))
        << "\" r=\"" << fmt(r * px_per_meter) << "\" fill=\"" << agent_color(i)
        << "\" fill-opacity=\"0.08\" stroke=\"" << agent_color(i)
        << "\" stroke-opacity=\"0.5\" stroke-width=\"1\"/>\n";
    svg << "<circle class=\"agent\" cx=\"" << fmt(X(x.px)) << "\" cy=\"" << fmt(Y(x.py))
        << "\" r=\"4\" fill=\"" << agent_color(i) << "\"/>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ipg
