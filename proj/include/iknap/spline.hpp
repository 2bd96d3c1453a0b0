#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

#include "iknap/rng.hpp"
#include "iknap/vec2.hpp"

namespace iknap {

/// Natural cubic spline through an ordered set of control points, chordal
/// parameterization, with a precomputed arc-length table for constant-speed
/// tracking. C2-continuous for three or more control points; a straight
/// segment for two.
class SplineTrajectory {
 public:
  static SplineTrajectory build(std::vector<Vec2> control_points, double target_speed,
                                int samples_per_segment = 128) {
    assert(control_points.size() >= 2);
    SplineTrajectory s;
    s.pts_ = std::move(control_points);
    s.target_speed_ = target_speed;
    const std::size_t n = s.pts_.size();

    s.t_.resize(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
      const double h = distance(s.pts_[i - 1], s.pts_[i]);
      assert(h > 0.0 && "consecutive control points must be distinct");
      s.t_[i] = s.t_[i - 1] + h;
    }

    s.m_.assign(n, Vec2{});
    if (n > 2) s.solve_second_derivatives();

    // Cumulative chord-length table over a dense parameter grid.
    const std::size_t total = (n - 1) * static_cast<std::size_t>(samples_per_segment);
    s.arc_u_.resize(total + 1);
    s.arc_s_.resize(total + 1);
    s.arc_u_[0] = s.t_.front();
    s.arc_s_[0] = 0.0;
    Vec2 prev = s.pts_.front();
    std::size_t idx = 1;
    for (std::size_t seg = 0; seg + 1 < n; ++seg) {
      for (int k = 1; k <= samples_per_segment; ++k, ++idx) {
        const double u =
            s.t_[seg] + (s.t_[seg + 1] - s.t_[seg]) * (static_cast<double>(k) / samples_per_segment);
        const Vec2 p = s.point_at_param(u);
        s.arc_u_[idx] = u;
        s.arc_s_[idx] = s.arc_s_[idx - 1] + distance(prev, p);
        prev = p;
      }
    }
    return s;
  }

  double total_length() const { return arc_s_.back(); }
  double target_speed() const { return target_speed_; }
  const std::vector<Vec2>& control_points() const { return pts_; }
  Vec2 goal() const { return pts_.back(); }

  Vec2 point_at_param(double u) const {
    const std::size_t i = interval(u);
    const double h = t_[i + 1] - t_[i];
    const double a = t_[i + 1] - u, b = u - t_[i];
    const Vec2 term = m_[i] * (a * a * a / (6.0 * h)) + m_[i + 1] * (b * b * b / (6.0 * h));
    const Vec2 lin = (pts_[i] / h - m_[i] * (h / 6.0)) * a + (pts_[i + 1] / h - m_[i + 1] * (h / 6.0)) * b;
    return term + lin;
  }

  Vec2 derivative_at_param(double u) const {
    const std::size_t i = interval(u);
    const double h = t_[i + 1] - t_[i];
    const double a = t_[i + 1] - u, b = u - t_[i];
    return m_[i] * (-a * a / (2.0 * h)) + m_[i + 1] * (b * b / (2.0 * h)) +
           (pts_[i + 1] - pts_[i]) / h - (m_[i + 1] - m_[i]) * (h / 6.0);
  }

  /// Point at arc length s, clamped to [0, total_length].
  Vec2 point_at(double s) const { return point_at_param(param_at(s)); }

  Vec2 tangent_at(double s) const { return derivative_at_param(param_at(s)).normalized(); }

 private:
  double param_at(double s) const {
    if (s <= 0.0) return arc_u_.front();
    if (s >= arc_s_.back()) return arc_u_.back();
    std::size_t lo = 0, hi = arc_s_.size() - 1;
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (arc_s_[mid] <= s)
        lo = mid;
      else
        hi = mid;
    }
    const double span = arc_s_[lo + 1] - arc_s_[lo];
    const double t = span > 0.0 ? (s - arc_s_[lo]) / span : 0.0;
    return arc_u_[lo] + (arc_u_[lo + 1] - arc_u_[lo]) * t;
  }

  std::size_t interval(double u) const {
    if (u <= t_.front()) return 0;
    if (u >= t_.back()) return t_.size() - 2;
    std::size_t lo = 0, hi = t_.size() - 1;
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (t_[mid] <= u)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }

  // Natural boundary conditions: second derivative zero at both ends.
  void solve_second_derivatives() {
    const std::size_t n = pts_.size();
    const std::size_t k = n - 2;  // unknowns m_[1..n-2]
    std::vector<double> diag(k), sub(k), sup(k);
    std::vector<Vec2> rhs(k);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = t_[i] - t_[i - 1];
      const double h1 = t_[i + 1] - t_[i];
      sub[i - 1] = h0;
      diag[i - 1] = 2.0 * (h0 + h1);
      sup[i - 1] = h1;
      rhs[i - 1] = ((pts_[i + 1] - pts_[i]) / h1 - (pts_[i] - pts_[i - 1]) / h0) * 6.0;
    }
    // Thomas algorithm.
    for (std::size_t i = 1; i < k; ++i) {
      const double w = sub[i] / diag[i - 1];
      diag[i] -= w * sup[i - 1];
      rhs[i] -= rhs[i - 1] * w;
    }
    m_[k] = rhs[k - 1] / diag[k - 1];
    for (std::size_t i = k - 1; i >= 1; --i) m_[i] = (rhs[i - 1] - m_[i + 1] * sup[i - 1]) / diag[i - 1];
  }

  std::vector<Vec2> pts_;
  std::vector<double> t_;
  std::vector<Vec2> m_;
  std::vector<double> arc_u_, arc_s_;
  double target_speed_ = 0.0;
};

/// Random subject trajectory: natural cubic spline from start to goal through
/// `interior_min`..`interior_max` uniformly placed interior points, tracked at
/// a target speed drawn uniformly from [speed_min, speed_max].
inline SplineTrajectory generate_subject_trajectory(Vec2 start, Vec2 goal, double field_size, Rng& rng,
                                                    int interior_min = 2, int interior_max = 4,
                                                    double speed_min = 0.5, double speed_max = 2.0) {
  const int interior = static_cast<int>(rng.uniform_int(interior_min, interior_max));
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(interior) + 2);
  pts.push_back(start);
  for (int i = 0; i < interior; ++i)
    pts.push_back({rng.uniform(0.0, field_size), rng.uniform(0.0, field_size)});
  pts.push_back(goal);
  const double speed = rng.uniform(speed_min, speed_max);
  return SplineTrajectory::build(std::move(pts), speed);
}

}  // namespace iknap
