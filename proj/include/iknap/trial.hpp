#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "iknap/comms.hpp"
#include "iknap/control.hpp"
#include "iknap/world.hpp"

namespace iknap {

/// Aggregated outcome of one seeded closed-loop run.
struct TrialResult {
  SchemeKind scheme = SchemeKind::NO_COMM;
  std::string config_digest;
  std::uint64_t seed = 0;
  double makespan = 0.0;            // s; equals max_sim_time when timed_out
  bool timed_out = false;
  int agent_subject_collisions = 0;  // distinct contact events
  int agent_agent_collisions = 0;
  double opt_time_mean = 0.0;        // s per epoch (wall clock)
  double opt_time_max = 0.0;
  double bandwidth_mean = 0.0;       // units per epoch
  int deliveries_total = 0;
  std::vector<EpochLog> epochs;
};

/// Optional probes for tests and audits. on_epoch fires just before the epoch
/// is executed (beliefs still pre-delivery); on_tick fires after integration.
struct TrialHooks {
  std::function<void(const WorldState&, const BeliefTable&, const ObservationBuffer&)> on_epoch;
  std::function<void(const WorldState&, const BeliefTable&)> on_tick;
};

/// Closed loop on a prepared world: per tick, agents observe visible subjects
/// and fuse their own beliefs; every comm_period the infrastructure runs the
/// scheme's selection and delivers; agents stop for predicted collisions and
/// PD-track their plans, subjects PD-track their splines. Ends when every
/// agent is within goal_tolerance of its goal, or at max_sim_time.
inline TrialResult run_trial_world(WorldState world, const ScenarioConfig& cfg, SchemeKind scheme,
                                   const TrialHooks* hooks = nullptr) {
  const int n = static_cast<int>(world.agents.size());
  const int m = static_cast<int>(world.subjects.size());

  Rng obs_rng(cfg.seed, "observation");
  Rng bw_rng(cfg.seed, "bandwidth");
  const BandwidthMatrix bandwidth =
      BandwidthMatrix::sample(n, cfg.pairwise_bandwidth_min, cfg.pairwise_bandwidth_max, bw_rng);

  BeliefTable beliefs(n, m, cfg.field_size, cfg.subject_v_max);
  ObservationBuffer fresh(n, m);
  const ObservationModel model{cfg.alpha, cfg.sigma_floor, cfg.perceived_sigma_scale};
  const ProcessNoise q{cfg.process_noise_pos, cfg.process_noise_vel};
  const UtilityParams params{cfg.p1, cfg.p2, cfg.horizon, cfg.collision_radius, cfg.kappa_norm};
  const PdGains gains{cfg.kp, cfg.kd};

  TrialResult result;
  result.scheme = scheme;
  result.seed = cfg.seed;
  result.config_digest = config_digest(cfg);

  const int epoch_ticks = cfg.epoch_ticks();
  const std::int64_t max_ticks = static_cast<std::int64_t>(cfg.max_sim_time / cfg.sim_dt + 0.5);

  std::vector<char> as_contact(static_cast<std::size_t>(n) * std::max(m, 1), 0);
  std::vector<char> aa_contact(static_cast<std::size_t>(n) * std::max(n, 1), 0);
  std::vector<Vec2> agent_accel(n), subject_accel(m);
  std::vector<GaussianBelief> predicted(m);

  for (;;) {
    const double now = world.time();

    // Perception: every agent observes every visible subject and fuses the
    // result into its own belief immediately.
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < m; ++k) {
        if (!is_visible(world.agents[i].body.pos, world.subjects[k].body.pos, world.walls)) continue;
        const Observation obs =
            observe(model, world.agents[i].body, world.subjects[k].body, i, k, now, obs_rng);
        GaussianBelief& belief = beliefs.at(i, k);
        belief = fuse_at(belief, obs, q);
        fresh.record(obs);
      }
    }

    // Communication epoch.
    if (world.tick % epoch_ticks == 0) {
      if (hooks && hooks->on_epoch) hooks->on_epoch(world, beliefs, fresh);
      result.epochs.push_back(run_epoch(world, beliefs, fresh, scheme, bandwidth, params, cfg));
      fresh.clear();
    }

    // Termination checks.
    bool all_arrived = true;
    for (const AgentState& a : world.agents)
      if (distance(a.body.pos, a.goal) > cfg.goal_tolerance) {
        all_arrived = false;
        break;
      }
    if (all_arrived) {
      result.makespan = now;
      break;
    }
    if (world.tick >= max_ticks) {
      result.makespan = cfg.max_sim_time;
      result.timed_out = true;
      break;
    }

    // Agent control: collision assessment on beliefs predicted to now, then
    // PD tracking of the (possibly stop-limited) reference.
    for (int i = 0; i < n; ++i) {
      AgentState& a = world.agents[i];
      for (int k = 0; k < m; ++k) predicted[k] = predict_belief(beliefs.at(i, k), now, q);
      const CollisionAssessment assessment =
          assess_collision(a.path, a.progress, predicted, cfg.horizon, cfg.collision_radius,
                           cfg.sim_dt, cfg.collision_samples);
      agent_accel[i] = agent_control(a.body, a.path, a.progress, assessment, gains, cfg.accel_max,
                                     cfg.speed_ramp, cfg.stop_margin);
      const double v_ref =
          reference_speed(a.path, a.progress, assessment, cfg.speed_ramp, cfg.stop_margin);
      a.progress = advance_progress(a.progress, v_ref, cfg.sim_dt, a.path.total_length);
    }

    for (int k = 0; k < m; ++k) {
      SubjectState& s = world.subjects[k];
      subject_accel[k] =
          subject_control(s.body, s.traj, s.progress, gains, cfg.accel_max, cfg.speed_ramp);
      const double scale =
          std::clamp((s.traj.total_length() - s.progress) / cfg.speed_ramp, 0.0, 1.0);
      s.progress = advance_progress(s.progress, s.traj.target_speed() * scale, cfg.sim_dt,
                                    s.traj.total_length());
    }

    advance_world(world, agent_accel, subject_accel, cfg.sim_dt, cfg.agent_v_max, cfg.subject_v_max);

    // Collision events: count each contact once, on entry.
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < m; ++k) {
        const bool touching =
            distance(world.agents[i].body.pos, world.subjects[k].body.pos) < cfg.collision_radius;
        char& prev = as_contact[static_cast<std::size_t>(i) * std::max(m, 1) + k];
        if (touching && !prev) ++result.agent_subject_collisions;
        prev = touching;
      }
      for (int j = i + 1; j < n; ++j) {
        const bool touching =
            distance(world.agents[i].body.pos, world.agents[j].body.pos) < cfg.collision_radius;
        char& prev = aa_contact[static_cast<std::size_t>(i) * std::max(n, 1) + j];
        if (touching && !prev) ++result.agent_agent_collisions;
        prev = touching;
      }
    }

    if (hooks && hooks->on_tick) hooks->on_tick(world, beliefs);
  }

  for (const EpochLog& e : result.epochs) {
    result.opt_time_mean += e.optimizer_time;
    result.opt_time_max = std::max(result.opt_time_max, e.optimizer_time);
    result.bandwidth_mean += e.bandwidth_used;
    result.deliveries_total += e.deliveries;
  }
  if (!result.epochs.empty()) {
    result.opt_time_mean /= static_cast<double>(result.epochs.size());
    result.bandwidth_mean /= static_cast<double>(result.epochs.size());
  }
  return result;
}

/// Generates the scenario for the config and runs the closed loop.
inline TrialResult run_trial(const ScenarioConfig& cfg, SchemeKind scheme,
                             const TrialHooks* hooks = nullptr) {
  return run_trial_world(generate_scenario(cfg), cfg, scheme, hooks);
}

}  // namespace iknap
