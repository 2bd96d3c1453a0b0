#pragma once

#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "iknap/geometry.hpp"
#include "iknap/path.hpp"

namespace iknap {

class PlanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double min_distance_to_walls(Vec2 p, std::span<const Wall> walls) {
  double d = std::numeric_limits<double>::infinity();
  for (const Wall& w : walls) d = std::min(d, point_segment_distance(p, w.a, w.b));
  return d;
}

/// True when the segment keeps at least `clearance` from every wall.
inline bool segment_is_clear(Vec2 a, Vec2 b, std::span<const Wall> walls, double clearance) {
  for (const Wall& w : walls)
    if (segment_segment_distance(a, b, w.a, w.b) < clearance) return false;
  return true;
}

inline bool path_is_clear(const PlannedPath& path, std::span<const Wall> walls, double clearance) {
  for (std::size_t i = 1; i < path.waypoints.size(); ++i)
    if (!segment_is_clear(path.waypoints[i - 1], path.waypoints[i], walls, clearance)) return false;
  return true;
}

/// Shortest collision-free polyline from start to goal over a visibility
/// graph. Graph vertices are the endpoints, plus ring points offset from each
/// wall endpoint by slightly more than the clearance so that edges between
/// them stay outside the inflated wall.
inline PlannedPath plan_path(Vec2 start, Vec2 goal, std::span<const Wall> walls, double clearance,
                             double target_speed = 0.0) {
  if (start == goal) return PlannedPath::from_waypoints({start}, target_speed);
  if (segment_is_clear(start, goal, walls, clearance))
    return PlannedPath::from_waypoints({start, goal}, target_speed);

  // Ring points at 45-degree spacing: adjacent chords keep distance
  // radius*cos(22.5 deg) ~ 1.06*clearance from the endpoint.
  const double radius = clearance * 1.15;
  std::vector<Vec2> verts = {start, goal};
  std::vector<int> vert_tip = {-1, -1};  // which wall endpoint a vertex wraps
  std::vector<Vec2> tips;
  for (const Wall& w : walls) {
    for (int e = 0; e < 2; ++e) {
      const Vec2 tip = e == 0 ? w.a : w.b;
      const Vec2 other = e == 0 ? w.b : w.a;
      const Vec2 axis = (tip - other).normalized();
      tips.push_back(tip);
      for (int k = 0; k < 8; ++k) {
        const Vec2 v = tip + (axis * radius).rotated(k * 0.78539816339744830962);
        if (min_distance_to_walls(v, walls) >= clearance) {
          verts.push_back(v);
          vert_tip.push_back(static_cast<int>(tips.size()) - 1);
        }
      }
    }
  }

  const std::size_t n = verts.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (segment_is_clear(verts[i], verts[j], walls, clearance)) {
        const double d = distance(verts[i], verts[j]);
        adj[i].push_back({j, d});
        adj[j].push_back({i, d});
      }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<std::size_t> prev(n, n);
  std::vector<bool> done(n, false);
  dist[0] = 0.0;
  for (;;) {
    std::size_t u = n;
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && dist[i] < best) {
        best = dist[i];
        u = i;
      }
    if (u == n || u == 1) break;
    done[u] = true;
    for (const auto& [v, w] : adj[u])
      if (dist[u] + w < dist[v]) {
        dist[v] = dist[u] + w;
        prev[v] = u;
      }
  }
  if (dist[1] == kInf) throw PlanningError("no collision-free path from start to goal");

  std::vector<std::size_t> chain;
  for (std::size_t v = 1; v != n; v = prev[v]) {
    chain.push_back(v);
    if (v == 0) break;
  }
  std::vector<Vec2> waypoints;
  std::vector<int> tip_of;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    waypoints.push_back(verts[*it]);
    tip_of.push_back(vert_tip[*it]);
  }

  // Collapse runs of ring points around the same wall endpoint into one
  // bisector point when the shortcut still keeps clearance.
  for (std::size_t i = 1; i + 1 < waypoints.size();) {
    std::size_t j = i;
    while (j + 1 < waypoints.size() - 1 && tip_of[j + 1] == tip_of[i] && tip_of[i] >= 0) ++j;
    if (j > i) {
      Vec2 dir{};
      for (std::size_t k = i; k <= j; ++k) dir += (waypoints[k] - tips[tip_of[i]]).normalized();
      const Vec2 merged = tips[tip_of[i]] + dir.normalized() * radius;
      if (min_distance_to_walls(merged, walls) >= clearance &&
          segment_is_clear(waypoints[i - 1], merged, walls, clearance) &&
          segment_is_clear(merged, waypoints[j + 1], walls, clearance)) {
        waypoints.erase(waypoints.begin() + i, waypoints.begin() + j + 1);
        tip_of.erase(tip_of.begin() + i, tip_of.begin() + j + 1);
        waypoints.insert(waypoints.begin() + i, merged);
        tip_of.insert(tip_of.begin() + i, -1);
      }
    }
    ++i;
  }
  return PlannedPath::from_waypoints(std::move(waypoints), target_speed);
}

}  // namespace iknap
