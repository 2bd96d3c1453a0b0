#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "iknap/body.hpp"
#include "iknap/config.hpp"
#include "iknap/geometry.hpp"
#include "iknap/path.hpp"
#include "iknap/planner.hpp"
#include "iknap/rng.hpp"
#include "iknap/spline.hpp"

namespace iknap {

class InfeasibleScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AgentState {
  BodyState body;
  Vec2 goal;
  PlannedPath path;
  double progress = 0.0;  // reference arc length along path (m)
};

struct SubjectState {
  BodyState body;
  SplineTrajectory traj;
  double progress = 0.0;  // reference arc length along spline (m)
};

/// Ground truth for one trial. Time is tracked as an integer tick count so it
/// is always an exact multiple of sim_dt.
struct WorldState {
  std::int64_t tick = 0;
  double sim_dt = 0.0;
  std::vector<AgentState> agents;
  std::vector<SubjectState> subjects;
  std::vector<Wall> walls;

  double time() const { return static_cast<double>(tick) * sim_dt; }
};

namespace detail {

inline Vec2 sample_point(Rng& rng, double field) {
  return {rng.uniform(0.0, field), rng.uniform(0.0, field)};
}

inline Vec2 place_separated(Rng& rng, double field, std::span<const Vec2> taken, double min_sep,
                            const char* what) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Vec2 p = sample_point(rng, field);
    bool ok = true;
    for (const Vec2& q : taken)
      if (distance(p, q) < min_sep) {
        ok = false;
        break;
      }
    if (ok) return p;
  }
  throw InfeasibleScenario(std::string("could not place ") + what + " after 1000 attempts (field too crowded)");
}

}  // namespace detail

/// Builds a full randomized scenario: separated starts and goals, random
/// walls that keep clear of every start/goal disc, wrap-around agent paths,
/// and random subject splines. Bit-identical output for identical configs.
inline WorldState generate_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed, "scenario");
  WorldState world;
  world.sim_dt = cfg.sim_dt;

  const double field = cfg.field_size;
  const double sep = 2.0 * cfg.collision_radius;

  std::vector<Vec2> starts;  // agents then subjects
  for (int i = 0; i < cfg.n_agents + cfg.m_subjects; ++i)
    starts.push_back(detail::place_separated(rng, field, starts, sep, i < cfg.n_agents ? "agent" : "subject"));

  std::vector<Vec2> goals;
  for (int i = 0; i < cfg.n_agents + cfg.m_subjects; ++i)
    goals.push_back(detail::place_separated(rng, field, goals, sep, "goal"));

  // Walls must stay off every start/goal disc; disc radius 2*collision_radius
  // strictly exceeds the planner clearance at the default clearance_factor.
  std::vector<Vec2> keep_clear = starts;
  keep_clear.insert(keep_clear.end(), goals.begin(), goals.end());
  const double wall_clear = std::max(sep, cfg.clearance() * 1.25);

  for (int round = 0;; ++round) {
    world.walls.clear();
    for (int i = 0; i < cfg.n_walls; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
        const Vec2 center = detail::sample_point(rng, field);
        const double len = rng.uniform(cfg.wall_length_min, cfg.wall_length_max);
        const double angle = rng.uniform(0.0, 6.283185307179586);
        const Vec2 half = Vec2{len / 2.0, 0.0}.rotated(angle);
        const Wall w{center - half, center + half};
        if (w.a.x < 0 || w.a.x > field || w.a.y < 0 || w.a.y > field || w.b.x < 0 || w.b.x > field ||
            w.b.y < 0 || w.b.y > field)
          continue;
        bool ok = true;
        for (const Vec2& p : keep_clear)
          if (point_segment_distance(p, w.a, w.b) < wall_clear) {
            ok = false;
            break;
          }
        if (ok) {
          world.walls.push_back(w);
          placed = true;
        }
      }
      if (!placed) throw InfeasibleScenario("could not place wall after 1000 attempts");
    }

    // Verify every agent can actually be routed; re-roll the walls otherwise.
    bool plannable = true;
    world.agents.clear();
    try {
      for (int i = 0; i < cfg.n_agents; ++i) {
        AgentState a;
        a.body.pos = starts[i];
        a.goal = goals[i];
        a.path = plan_path(a.body.pos, a.goal, world.walls, cfg.clearance(), cfg.agent_speed);
        world.agents.push_back(std::move(a));
      }
    } catch (const PlanningError&) {
      plannable = false;
    }
    if (plannable) break;
    if (round >= 50) throw InfeasibleScenario("could not generate a plannable wall layout after 50 rounds");
  }

  for (int k = 0; k < cfg.m_subjects; ++k) {
    SubjectState s;
    s.body.pos = starts[cfg.n_agents + k];
    s.traj = generate_subject_trajectory(s.body.pos, goals[cfg.n_agents + k], field, rng, 2, 4,
                                         cfg.subject_speed_min, cfg.subject_speed_max);
    world.subjects.push_back(std::move(s));
  }
  return world;
}

/// Semi-implicit Euler step: v += a*dt, speed clamped to the class cap, then
/// p += v*dt. Accelerations must already be clamped by the controllers.
inline void advance_world(WorldState& world, std::span<const Vec2> agent_accel,
                          std::span<const Vec2> subject_accel, double dt, double agent_v_max,
                          double subject_v_max) {
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    BodyState& b = world.agents[i].body;
    b.vel = (b.vel + agent_accel[i] * dt).clamped(agent_v_max);
    b.pos += b.vel * dt;
  }
  for (std::size_t k = 0; k < world.subjects.size(); ++k) {
    BodyState& b = world.subjects[k].body;
    b.vel = (b.vel + subject_accel[k] * dt).clamped(subject_v_max);
    b.pos += b.vel * dt;
  }
  ++world.tick;
}

}  // namespace iknap
