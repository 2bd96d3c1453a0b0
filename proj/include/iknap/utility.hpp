#pragma once

#include <algorithm>
#include <cmath>

#include "iknap/belief.hpp"
#include "iknap/path.hpp"

namespace iknap {

/// Tuning for the communication utility heuristic theta = p1*kappa + p2*tau.
struct UtilityParams {
  double p1 = 1.0;
  double p2 = 1.0;
  double horizon = 5.0;      // t_H (s)
  double d_min = 0.5;        // proximity floor (m); defaults to collision radius
  double kappa_norm = 1.0;   // raw kappa divisor (empirical 95th percentile)
};

/// Information gain the receiver would obtain from the sender's observation:
/// KL divergence from the receiver's current belief to the hypothetical
/// posterior. Pure; the receiver's actual belief is untouched.
inline double kappa(const Observation& sender_obs, const GaussianBelief& receiver_belief) {
  const GaussianBelief posterior = fuse(receiver_belief, sender_obs);
  return kl_divergence(posterior, receiver_belief);
}

/// Navigation relevance of subject h to receiver b: inverse-squared minimum
/// distance between b rolled along its planned path at its target speed and h
/// moving at constant velocity from the sender's belief mean, sampled every
/// sim_dt across the horizon (endpoints included).
inline double tau(const PlannedPath& receiver_path, double receiver_progress,
                  const GaussianBelief& subject_belief_of_sender, const UtilityParams& params,
                  double sim_dt) {
  const int steps = static_cast<int>(params.horizon / sim_dt + 0.5);
  double min_d_sq = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= steps; ++k) {
    const double t = k * sim_dt;
    const Vec2 bp = receiver_path.point_at(receiver_progress + receiver_path.target_speed * t);
    const Vec2 hp = subject_belief_of_sender.pos_mean + subject_belief_of_sender.vel_mean * t;
    min_d_sq = std::min(min_d_sq, distance_sq(bp, hp));
  }
  const double d = std::max(std::sqrt(min_d_sq), params.d_min);
  return 1.0 / (d * d);
}

/// Weighted linear combination of the two heuristics.
inline double utility(double kappa_val, double tau_val, const UtilityParams& params) {
  return params.p1 * kappa_val + params.p2 * tau_val;
}

}  // namespace iknap
