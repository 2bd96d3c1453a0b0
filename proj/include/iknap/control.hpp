#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "iknap/belief.hpp"
#include "iknap/body.hpp"
#include "iknap/path.hpp"
#include "iknap/rng.hpp"
#include "iknap/spline.hpp"

namespace iknap {

struct PdGains {
  double kp = 4.0;
  double kd = 4.0;
};

/// Belief-driven stop decision. stop_arclength is an absolute arc length
/// along the agent's own path; mean/std describe the distance-to-collision
/// distribution of the closest threatening subject.
struct CollisionAssessment {
  bool imminent = false;
  double stop_arclength = 0.0;
  double mean_distance_to_collision = 0.0;
  double distance_std = 0.0;
};

namespace detail {

/// Fixed standard-normal offsets used to sample positional beliefs.
/// Antithetic pairs keep the pattern zero-mean; the same pattern is used for
/// every assessment, which keeps trials bit-reproducible.
inline const std::vector<Vec2>& normal_offset_pattern() {
  static const std::vector<Vec2> pattern = [] {
    Rng rng(0x1db3u, "collision-pattern");
    std::vector<Vec2> p;
    p.reserve(256);
    for (int i = 0; i < 128; ++i) {
      const Vec2 z{rng.normal(), rng.normal()};
      p.push_back(z);
      p.push_back({-z.x, -z.y});
    }
    return p;
  }();
  return pattern;
}

inline double pattern_max_norm(int count) {
  const auto& p = normal_offset_pattern();
  double m = 0.0;
  for (int i = 0; i < count && i < static_cast<int>(p.size()); ++i) m = std::max(m, p[i].norm());
  return m;
}

}  // namespace detail

/// Rolls the agent along its path at target speed and each subject at its
/// belief-mean constant velocity over the horizon. The subject's start
/// position is sampled from its positional belief with a fixed deterministic
/// pattern; per colliding sample, the arc length traveled until separation
/// first drops below collision_radius is refined by bisection within the
/// detecting step. Safe stop = mean colliding arc length minus one standard
/// deviation. Beliefs must already be predicted to the current time.
inline CollisionAssessment assess_collision(const PlannedPath& path, double own_progress,
                                            std::span<const GaussianBelief> beliefs, double horizon,
                                            double collision_radius, double sim_dt,
                                            int sample_count = 32) {
  CollisionAssessment out;
  out.stop_arclength = own_progress;
  if (beliefs.empty() || path.waypoints.empty()) return out;

  const double speed = path.target_speed;
  const int steps = static_cast<int>(horizon / sim_dt + 0.5);
  const auto& pattern = detail::normal_offset_pattern();
  const int samples = std::min<int>(sample_count, static_cast<int>(pattern.size()));
  const double pattern_reach = detail::pattern_max_norm(samples);

  // Agent reference positions over the horizon, shared across subjects.
  std::vector<Vec2> agent_pts(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) agent_pts[k] = path.point_at(own_progress + speed * k * sim_dt);

  double best_stop = std::numeric_limits<double>::infinity();

  for (const GaussianBelief& belief : beliefs) {
    const double sigma_max = std::sqrt(std::max(belief.pos_var.x, belief.pos_var.y));
    const double reach = collision_radius + pattern_reach * sigma_max;

    // Conservative skip: no sampled start can collide if the mean track never
    // comes within the pattern's reach.
    double min_mean_dist = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= steps; ++k) {
      const Vec2 hp = belief.pos_mean + belief.vel_mean * (k * sim_dt);
      min_mean_dist = std::min(min_mean_dist, distance(agent_pts[k], hp));
      if (min_mean_dist <= reach) break;
    }
    if (min_mean_dist > reach) continue;

    const Vec2 sigma{std::sqrt(belief.pos_var.x), std::sqrt(belief.pos_var.y)};
    double sum = 0.0, sum_sq = 0.0;
    int hits = 0;

    for (int s = 0; s < samples; ++s) {
      const Vec2 start = belief.pos_mean + Vec2{pattern[s].x * sigma.x, pattern[s].y * sigma.y};
      double dist_to_collision = -1.0;

      if (distance(agent_pts[0], start) < collision_radius) {
        dist_to_collision = 0.0;
      } else {
        for (int k = 1; k <= steps; ++k) {
          const Vec2 hp = start + belief.vel_mean * (k * sim_dt);
          const double sep = distance(agent_pts[k], hp);
          if (sep < collision_radius) {
            // Bisect the crossing time within (t_{k-1}, t_k].
            double lo = (k - 1) * sim_dt, hi = k * sim_dt;
            for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
              const double mid = 0.5 * (lo + hi);
              const Vec2 ap = path.point_at(own_progress + speed * mid);
              const Vec2 sp = start + belief.vel_mean * mid;
              (distance(ap, sp) < collision_radius ? hi : lo) = mid;
            }
            dist_to_collision = speed * hi;
            break;
          }
        }
      }
      if (dist_to_collision >= 0.0) {
        ++hits;
        sum += dist_to_collision;
        sum_sq += dist_to_collision * dist_to_collision;
      }
    }

    if (hits == 0) continue;
    const double mean = sum / hits;
    const double var = std::max(0.0, sum_sq / hits - mean * mean);
    const double std_dev = std::sqrt(var);
    const double stop = own_progress + std::max(0.0, mean - std_dev);
    if (!out.imminent || stop < best_stop) {
      out.imminent = true;
      best_stop = stop;
      out.mean_distance_to_collision = mean;
      out.distance_std = std_dev;
    }
  }

  if (out.imminent) out.stop_arclength = best_stop;
  return out;
}

/// Reference speed along the path at the given progress: the target speed,
/// ramped linearly to zero over `ramp` meters before the path end and, when a
/// stop is pending, before the stop arc length. The stop point is pulled back
/// by `stop_margin` so the tracking body settles short of it even with one
/// tick of overshoot.
inline double reference_speed(const PlannedPath& path, double progress,
                              const CollisionAssessment& assessment, double ramp,
                              double stop_margin = 0.0) {
  double scale = std::clamp((path.total_length - progress) / ramp, 0.0, 1.0);
  if (assessment.imminent) {
    const double hold = assessment.stop_arclength - stop_margin;
    scale = std::min(scale, std::clamp((hold - progress) / ramp, 0.0, 1.0));
  }
  return path.target_speed * scale;
}

/// PD tracking of a reference point/velocity, clamped to the acceleration cap.
inline Vec2 pd_accel(const BodyState& state, Vec2 p_ref, Vec2 v_ref, PdGains gains, double a_max) {
  const Vec2 a = (p_ref - state.pos) * gains.kp + (v_ref - state.vel) * gains.kd;
  return a.clamped(a_max);
}

inline Vec2 agent_control(const BodyState& state, const PlannedPath& path, double progress,
                          const CollisionAssessment& assessment, PdGains gains, double a_max,
                          double ramp, double stop_margin = 0.0) {
  const double v_ref_mag = reference_speed(path, progress, assessment, ramp, stop_margin);
  const Vec2 p_ref = path.point_at(progress);
  const Vec2 v_ref = path.tangent_at(progress) * v_ref_mag;
  return pd_accel(state, p_ref, v_ref, gains, a_max);
}

/// Subjects track their spline with the same PD law and end-of-path ramp, but
/// never stop for anything.
inline Vec2 subject_control(const BodyState& state, const SplineTrajectory& traj, double progress,
                            PdGains gains, double a_max, double ramp) {
  const double scale = std::clamp((traj.total_length() - progress) / ramp, 0.0, 1.0);
  const Vec2 p_ref = traj.point_at(progress);
  const Vec2 v_ref = traj.tangent_at(progress) * (traj.target_speed() * scale);
  return pd_accel(state, p_ref, v_ref, gains, a_max);
}

/// Advances a reference along its path by one tick at the current reference
/// speed (used for both agents and subjects).
inline double advance_progress(double progress, double ref_speed, double dt, double total_length) {
  return std::min(progress + ref_speed * dt, total_length);
}

}  // namespace iknap
