#include <sstream>

#include "doctest.h"
#include "iknap/config.hpp"
#include "iknap/world.hpp"

using namespace iknap;

namespace {

bool same_world(const WorldState& a, const WorldState& b) {
  if (a.agents.size() != b.agents.size() || a.subjects.size() != b.subjects.size() ||
      a.walls.size() != b.walls.size())
    return false;
  for (std::size_t i = 0; i < a.agents.size(); ++i) {
    if (!(a.agents[i].body.pos == b.agents[i].body.pos)) return false;
    if (!(a.agents[i].goal == b.agents[i].goal)) return false;
    if (a.agents[i].path.waypoints != b.agents[i].path.waypoints) return false;
  }
  for (std::size_t k = 0; k < a.subjects.size(); ++k) {
    if (!(a.subjects[k].body.pos == b.subjects[k].body.pos)) return false;
    if (a.subjects[k].traj.control_points() != b.subjects[k].traj.control_points()) return false;
    if (a.subjects[k].traj.target_speed() != b.subjects[k].traj.target_speed()) return false;
  }
  for (std::size_t w = 0; w < a.walls.size(); ++w)
    if (!(a.walls[w].a == b.walls[w].a) || !(a.walls[w].b == b.walls[w].b)) return false;
  return true;
}

}  // namespace

TEST_CASE("generate_scenario: degenerate empty world") {
  ScenarioConfig cfg;
  cfg.n_agents = 0;
  cfg.m_subjects = 0;
  cfg.n_walls = 0;
  const WorldState w = generate_scenario(cfg);
  CHECK(w.agents.empty());
  CHECK(w.subjects.empty());
  CHECK(w.walls.empty());
}

TEST_CASE("generate_scenario: identical seeds give identical worlds") {
  ScenarioConfig cfg;
  cfg.seed = 42;
  const WorldState a = generate_scenario(cfg);
  const WorldState b = generate_scenario(cfg);
  CHECK(same_world(a, b));
}

TEST_CASE("generate_scenario: default composition and separation") {
  ScenarioConfig cfg;  // n=5, m=5, w=10 defaults
  const WorldState w = generate_scenario(cfg);
  CHECK(w.agents.size() == 5);
  CHECK(w.subjects.size() == 5);
  CHECK(w.walls.size() == 10);

  std::vector<Vec2> starts;
  for (const auto& a : w.agents) starts.push_back(a.body.pos);
  for (const auto& s : w.subjects) starts.push_back(s.body.pos);
  for (std::size_t i = 0; i < starts.size(); ++i)
    for (std::size_t j = i + 1; j < starts.size(); ++j)
      CHECK(distance(starts[i], starts[j]) >= 2.0 * cfg.collision_radius);

  // Walls keep clear of every start and goal disc.
  for (const Wall& wall : w.walls) {
    for (const auto& a : w.agents) {
      CHECK(point_segment_distance(a.body.pos, wall.a, wall.b) >= 2.0 * cfg.collision_radius);
      CHECK(point_segment_distance(a.goal, wall.a, wall.b) >= 2.0 * cfg.collision_radius);
    }
    for (const auto& s : w.subjects)
      CHECK(point_segment_distance(s.body.pos, wall.a, wall.b) >= 2.0 * cfg.collision_radius);
  }

  // Every agent got a wall-respecting plan.
  for (const auto& a : w.agents) {
    CHECK(!a.path.waypoints.empty());
    CHECK(path_is_clear(a.path, w.walls, cfg.clearance() * (1.0 - 1e-9)));
  }
}

TEST_CASE("generate_scenario: overcrowded field is an explicit error") {
  ScenarioConfig cfg;
  cfg.field_size = 2.0;
  cfg.n_agents = 60;
  cfg.m_subjects = 0;
  cfg.n_walls = 0;
  cfg.wall_length_min = 0.5;
  cfg.wall_length_max = 1.0;
  CHECK_THROWS_AS((void)generate_scenario(cfg), InfeasibleScenario);
}

TEST_CASE("advance_world: constant velocity and constant acceleration") {
  WorldState w;
  w.sim_dt = 0.1;
  w.agents.resize(1);
  w.agents[0].body.pos = {0, 0};
  w.agents[0].body.vel = {1, 0};
  std::vector<Vec2> a{{0, 0}};
  advance_world(w, a, {}, 0.1, 100.0, 100.0);
  CHECK(w.agents[0].body.pos.x == doctest::Approx(0.1));
  CHECK(w.agents[0].body.vel.x == doctest::Approx(1.0));
  CHECK(w.time() == doctest::Approx(0.1));

  w.agents[0].body = {{0, 0}, {0, 0}};
  a[0] = {2, 0};
  advance_world(w, a, {}, 0.1, 100.0, 100.0);
  CHECK(w.agents[0].body.vel.x == doctest::Approx(0.2));
  CHECK(w.agents[0].body.pos.x == doctest::Approx(0.02));
}

TEST_CASE("advance_world: zero-acceleration drift matches closed form") {
  WorldState w;
  w.sim_dt = 0.1;
  w.agents.resize(1);
  w.agents[0].body = {{0, 0}, {1, 0}};
  std::vector<Vec2> a{{0, 0}};
  for (int i = 0; i < 10; ++i) advance_world(w, a, {}, 0.1, 100.0, 100.0);
  CHECK(std::abs(w.agents[0].body.pos.x - 1.0) < 1e-12);
  CHECK(w.agents[0].body.pos.y == 0.0);
}

TEST_CASE("config: file parsing, overrides and errors") {
  ScenarioConfig cfg;
  std::istringstream in(
      "# comment\n"
      "n_agents = 7\n"
      "alpha = 0.02   # inline comment\n"
      "seed = 99\n");
  apply_config_text(cfg, in, "test");
  CHECK(cfg.n_agents == 7);
  CHECK(cfg.alpha == doctest::Approx(0.02));
  CHECK(cfg.seed == 99);

  std::istringstream bad_key("nonsense = 3\n");
  CHECK_THROWS_AS(apply_config_text(cfg, bad_key, "test"), ConfigError);
  std::istringstream bad_value("n_agents = many\n");
  CHECK_THROWS_AS(apply_config_text(cfg, bad_value, "test"), ConfigError);

  ScenarioConfig invalid;
  invalid.comm_period = 0.01;  // < sim_dt
  CHECK_THROWS_AS(validate(invalid), ConfigError);
  invalid = ScenarioConfig{};
  invalid.pairwise_bandwidth_min = 0;
  CHECK_THROWS_AS(validate(invalid), ConfigError);
  invalid = ScenarioConfig{};
  invalid.bandwidth_limit = -1;
  CHECK_THROWS_AS(validate(invalid), ConfigError);
}

TEST_CASE("config: digest is stable and seed-sensitive") {
  ScenarioConfig a, b;
  CHECK(config_digest(a) == config_digest(b));
  b.seed = 2;
  CHECK(config_digest(a) != config_digest(b));
}
