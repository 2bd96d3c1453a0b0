#pragma once

#include <cassert>
#include <vector>

#include "iknap/vec2.hpp"

namespace iknap {

/// Polyline path with arc-length addressing. A single-waypoint path is a
/// degenerate "stay here" path of length zero.
struct PlannedPath {
  std::vector<Vec2> waypoints;
  std::vector<double> cumulative;  // arc length at each waypoint
  double total_length = 0.0;
  double target_speed = 0.0;       // m/s

  static PlannedPath from_waypoints(std::vector<Vec2> pts, double target_speed) {
    PlannedPath p;
    p.waypoints = std::move(pts);
    p.target_speed = target_speed;
    p.cumulative.resize(p.waypoints.size(), 0.0);
    for (std::size_t i = 1; i < p.waypoints.size(); ++i)
      p.cumulative[i] = p.cumulative[i - 1] + distance(p.waypoints[i - 1], p.waypoints[i]);
    p.total_length = p.cumulative.empty() ? 0.0 : p.cumulative.back();
    return p;
  }

  /// Point at arc length s, clamped to [0, total_length].
  Vec2 point_at(double s) const {
    assert(!waypoints.empty());
    if (s <= 0.0 || waypoints.size() == 1) return waypoints.front();
    if (s >= total_length) return waypoints.back();
    std::size_t i = segment_index(s);
    const double seg_len = cumulative[i + 1] - cumulative[i];
    const double t = seg_len > 0.0 ? (s - cumulative[i]) / seg_len : 0.0;
    return waypoints[i] + (waypoints[i + 1] - waypoints[i]) * t;
  }

  /// Unit tangent of the segment containing s; (0,0) for a degenerate path.
  Vec2 tangent_at(double s) const {
    if (waypoints.size() < 2) return {};
    std::size_t i = segment_index(s);
    return (waypoints[i + 1] - waypoints[i]).normalized();
  }

  Vec2 goal() const { return waypoints.back(); }

 private:
  std::size_t segment_index(double s) const {
    std::size_t lo = 0, hi = waypoints.size() - 1;
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cumulative[mid] <= s)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }
};

}  // namespace iknap
