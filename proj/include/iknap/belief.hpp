#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "iknap/body.hpp"
#include "iknap/geometry.hpp"
#include "iknap/rng.hpp"

namespace iknap {

/// Distance-dependent Gaussian observation noise: sigma = alpha / d^2 per
/// axis, never below sigma_floor. The self-assigned (perceived) sigma is the
/// true sampling sigma times perceived_scale.
struct ObservationModel {
  double alpha = 0.01;
  double sigma_floor = 1e-3;
  double perceived_scale = 1.0;

  double true_sigma(double dist) const {
    const double d2 = dist * dist;
    if (d2 <= 0.0) return sigma_floor;
    return std::max(alpha / d2, sigma_floor);
  }
};

/// One noisy position/velocity sample of a subject, with the observer's
/// per-axis self-assigned standard deviation.
struct Observation {
  int observer = -1;
  int subject = -1;
  double time = 0.0;
  Vec2 pos_mean;
  Vec2 vel_mean;
  Vec2 pos_sigma;  // m, per axis, > 0
  Vec2 vel_sigma;  // m/s, per axis, > 0
};

/// Diagonal Gaussian over a subject's position and velocity (4 independent
/// axes), as held by one agent.
struct GaussianBelief {
  int owner = -1;
  int subject = -1;
  Vec2 pos_mean;
  Vec2 vel_mean;
  Vec2 pos_var;  // m^2, per axis, > 0
  Vec2 vel_var;  // (m/s)^2, per axis, > 0
  double last_update = 0.0;
};

struct ProcessNoise {
  double q_pos = 0.05;  // m^2/s
  double q_vel = 0.05;  // (m/s)^2/s
};

/// Near-uninformative prior for a never-observed subject: field center at
/// rest, with field-sized position variance and v_max-sized velocity variance.
inline GaussianBelief initial_belief(int owner, int subject, double field_size, double subject_v_max) {
  GaussianBelief b;
  b.owner = owner;
  b.subject = subject;
  b.pos_mean = {field_size / 2.0, field_size / 2.0};
  b.vel_mean = {0.0, 0.0};
  b.pos_var = {field_size * field_size, field_size * field_size};
  b.vel_var = {subject_v_max * subject_v_max, subject_v_max * subject_v_max};
  b.last_update = 0.0;
  return b;
}

/// A subject is visible when no wall crosses the open sight segment.
inline bool is_visible(Vec2 agent_pos, Vec2 subject_pos, std::span<const Wall> walls) {
  for (const Wall& w : walls)
    if (segment_blocks_sight(agent_pos, subject_pos, w)) return false;
  return true;
}

inline Observation observe(const ObservationModel& model, const BodyState& observer,
                           const BodyState& subject, int observer_id, int subject_id, double time,
                           Rng& rng) {
  const double sigma = model.true_sigma(distance(observer.pos, subject.pos));
  Observation obs;
  obs.observer = observer_id;
  obs.subject = subject_id;
  obs.time = time;
  obs.pos_mean = {rng.normal(subject.pos.x, sigma), rng.normal(subject.pos.y, sigma)};
  obs.vel_mean = {rng.normal(subject.vel.x, sigma), rng.normal(subject.vel.y, sigma)};
  const double perceived = sigma * model.perceived_scale;
  obs.pos_sigma = {perceived, perceived};
  obs.vel_sigma = {perceived, perceived};
  return obs;
}

/// Constant-velocity prediction. Position variance grows by the velocity
/// variance integrated over dt plus process noise; velocity variance grows by
/// process noise alone.
inline GaussianBelief predict_belief(const GaussianBelief& belief, double to_time, ProcessNoise q = {}) {
  assert(to_time >= belief.last_update);
  const double dt = to_time - belief.last_update;
  if (dt <= 0.0) return belief;
  GaussianBelief out = belief;
  out.pos_mean += belief.vel_mean * dt;
  out.pos_var.x += belief.vel_var.x * dt * dt + q.q_pos * dt;
  out.pos_var.y += belief.vel_var.y * dt * dt + q.q_pos * dt;
  out.vel_var.x += q.q_vel * dt;
  out.vel_var.y += q.q_vel * dt;
  out.last_update = to_time;
  return out;
}

namespace detail {

inline void fuse_axis(double& mean, double& var, double obs_mean, double obs_sigma) {
  const double prior_prec = 1.0 / var;
  const double obs_prec = 1.0 / (obs_sigma * obs_sigma);
  const double post_prec = prior_prec + obs_prec;
  mean = (mean * prior_prec + obs_mean * obs_prec) / post_prec;
  var = 1.0 / post_prec;
}

}  // namespace detail

/// Gaussian Bayes update, independently per axis: posterior precision is the
/// sum of prior and observation precisions, posterior mean the
/// precision-weighted average. The caller predicts the prior to the
/// observation time first.
inline GaussianBelief fuse(const GaussianBelief& belief, const Observation& obs) {
  assert(belief.subject == obs.subject);
  GaussianBelief out = belief;
  detail::fuse_axis(out.pos_mean.x, out.pos_var.x, obs.pos_mean.x, obs.pos_sigma.x);
  detail::fuse_axis(out.pos_mean.y, out.pos_var.y, obs.pos_mean.y, obs.pos_sigma.y);
  detail::fuse_axis(out.vel_mean.x, out.vel_var.x, obs.vel_mean.x, obs.vel_sigma.x);
  detail::fuse_axis(out.vel_mean.y, out.vel_var.y, obs.vel_mean.y, obs.vel_sigma.y);
  out.last_update = std::max(belief.last_update, obs.time);
  return out;
}

/// Predict-then-fuse. When the belief has already been updated past the
/// observation time (a fresher local sighting), the observation is fused at
/// the belief's own time instead of rewinding it.
inline GaussianBelief fuse_at(const GaussianBelief& belief, const Observation& obs, ProcessNoise q = {}) {
  const double t = std::max(belief.last_update, obs.time);
  return fuse(predict_belief(belief, t, q), obs);
}

/// Closed-form KL(post || prior) for diagonal Gaussians over the stacked
/// position+velocity vector, in nats.
inline double kl_divergence(const GaussianBelief& post, const GaussianBelief& prior) {
  auto axis = [](double mu_p, double var_p, double mu_q, double var_q) {
    return 0.5 * (var_p / var_q + (mu_q - mu_p) * (mu_q - mu_p) / var_q - 1.0 + std::log(var_q / var_p));
  };
  return axis(post.pos_mean.x, post.pos_var.x, prior.pos_mean.x, prior.pos_var.x) +
         axis(post.pos_mean.y, post.pos_var.y, prior.pos_mean.y, prior.pos_var.y) +
         axis(post.vel_mean.x, post.vel_var.x, prior.vel_mean.x, prior.vel_var.x) +
         axis(post.vel_mean.y, post.vel_var.y, prior.vel_mean.y, prior.vel_var.y);
}

/// Per-(agent, subject) belief storage for one trial.
class BeliefTable {
 public:
  BeliefTable() = default;
  BeliefTable(int n_agents, int m_subjects, double field_size, double subject_v_max)
      : n_(n_agents), m_(m_subjects) {
    table_.reserve(static_cast<std::size_t>(n_) * m_);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < m_; ++k) table_.push_back(initial_belief(i, k, field_size, subject_v_max));
  }

  GaussianBelief& at(int agent, int subject) { return table_[index(agent, subject)]; }
  const GaussianBelief& at(int agent, int subject) const { return table_[index(agent, subject)]; }
  int agents() const { return n_; }
  int subjects() const { return m_; }

 private:
  std::size_t index(int agent, int subject) const {
    assert(agent >= 0 && agent < n_ && subject >= 0 && subject < m_);
    return static_cast<std::size_t>(agent) * m_ + subject;
  }
  int n_ = 0, m_ = 0;
  std::vector<GaussianBelief> table_;
};

/// Fresh observations gathered since the previous epoch; keeps only the
/// latest observation per (agent, subject).
class ObservationBuffer {
 public:
  ObservationBuffer() = default;
  ObservationBuffer(int n_agents, int m_subjects) : n_(n_agents), m_(m_subjects) {
    buf_.resize(static_cast<std::size_t>(n_) * m_);
  }

  void record(const Observation& obs) {
    auto& slot = buf_[static_cast<std::size_t>(obs.observer) * m_ + obs.subject];
    if (!slot || slot->time <= obs.time) slot = obs;
  }

  const std::optional<Observation>& at(int agent, int subject) const {
    return buf_[static_cast<std::size_t>(agent) * m_ + subject];
  }

  void clear() { std::fill(buf_.begin(), buf_.end(), std::nullopt); }

  int count() const {
    int c = 0;
    for (const auto& o : buf_)
      if (o) ++c;
    return c;
  }

 private:
  int n_ = 0, m_ = 0;
  std::vector<std::optional<Observation>> buf_;
};

}  // namespace iknap
