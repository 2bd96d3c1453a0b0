#pragma once

#include <algorithm>
#include <cmath>

#include "iknap/vec2.hpp"

namespace iknap {

/// Static line-segment obstacle. Endpoints must be distinct.
struct Wall {
  Vec2 a;
  Vec2 b;
};

/// Signed area of the triangle (o, a, b), twice. Positive when (o, a, b)
/// turns counter-clockwise.
inline double cross3(Vec2 o, Vec2 a, Vec2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline int orient_sign(Vec2 o, Vec2 a, Vec2 b) {
  const double c = cross3(o, a, b);
  return (c > 0.0) - (c < 0.0);
}

/// p lies on the closed segment [a, b], assuming p is collinear with a and b.
inline bool on_segment_collinear(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

/// Closed-segment intersection test via orientation predicates. Handles
/// collinear overlap and shared endpoints exactly (no epsilon).
inline bool segment_intersects(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const int d1 = orient_sign(q1, q2, p1);
  const int d2 = orient_sign(q1, q2, p2);
  const int d3 = orient_sign(p1, p2, q1);
  const int d4 = orient_sign(p1, p2, q2);

  if (d1 * d2 < 0 && d3 * d4 < 0) return true;

  if (d1 == 0 && on_segment_collinear(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment_collinear(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment_collinear(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment_collinear(p1, p2, q2)) return true;
  return false;
}

/// True when `wall` intersects the OPEN segment (p, q): contact that happens
/// only at p or only at q does not block.
inline bool segment_blocks_sight(Vec2 p, Vec2 q, const Wall& wall) {
  const Vec2 w1 = wall.a, w2 = wall.b;
  const int d1 = orient_sign(w1, w2, p);
  const int d2 = orient_sign(w1, w2, q);
  const int d3 = orient_sign(p, q, w1);
  const int d4 = orient_sign(p, q, w2);

  // Sight line collinear with the wall line: blocked iff the 1-D overlap
  // contains a point other than p or q.
  if (d1 == 0 && d2 == 0) {
    const Vec2 dir = q - p;
    const bool use_x = std::abs(dir.x) >= std::abs(dir.y);
    auto coord = [use_x](Vec2 v) { return use_x ? v.x : v.y; };
    double lo1 = std::min(coord(p), coord(q)), hi1 = std::max(coord(p), coord(q));
    double lo2 = std::min(coord(w1), coord(w2)), hi2 = std::max(coord(w1), coord(w2));
    const double lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
    if (lo > hi) return false;                      // disjoint
    if (lo < hi) return true;                       // overlap of positive length
    return lo != coord(p) && lo != coord(q);        // single-point contact
  }

  if (d1 * d2 < 0 && d3 * d4 < 0) return true;      // proper interior crossing

  // Wall endpoint lying strictly inside the sight segment.
  if (d3 == 0 && on_segment_collinear(p, q, w1) && !(w1 == p) && !(w1 == q)) return true;
  if (d4 == 0 && on_segment_collinear(p, q, w2) && !(w2 == p) && !(w2 == q)) return true;

  // Remaining contacts (wall passing through p or q exactly) touch only an
  // endpoint of the sight segment.
  return false;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len_sq = ab.norm_sq();
  if (len_sq == 0.0) return distance(p, a);
  const double t = std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
  return distance(p, a + ab * t);
}

inline double segment_segment_distance(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  if (segment_intersects(p1, p2, q1, q2)) return 0.0;
  double d = point_segment_distance(p1, q1, q2);
  d = std::min(d, point_segment_distance(p2, q1, q2));
  d = std::min(d, point_segment_distance(q1, p1, p2));
  d = std::min(d, point_segment_distance(q2, p1, p2));
  return d;
}

}  // namespace iknap
