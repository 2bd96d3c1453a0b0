#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "iknap/report.hpp"
#include "iknap/trial.hpp"

using namespace iknap;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Occluded-crossing scenario: agent A heads east along y=10 while subject S
// descends from the north-east toward A's path, hidden from A by a wall for
// nearly its whole approach. Agent C watches S from the east the whole time.
// S brakes and parks 0.9 m short of the path, so an informed A pauses for the
// predicted crossing while an uninformed A never reacts at all.
WorldState occlusion_world(const ScenarioConfig& cfg) {
  WorldState w;
  w.sim_dt = cfg.sim_dt;
  w.walls.push_back({{14.0, 10.8}, {14.0, 24.0}});

  AgentState a;
  a.body.pos = {2.0, 10.0};
  a.goal = {38.0, 10.0};
  a.path = plan_path(a.body.pos, a.goal, w.walls, cfg.clearance(), cfg.agent_speed);
  w.agents.push_back(std::move(a));

  AgentState c;
  c.body.pos = {26.0, 16.0};
  c.goal = {26.0, 15.0};
  c.path = plan_path(c.body.pos, c.goal, w.walls, cfg.clearance(), cfg.agent_speed);
  w.agents.push_back(std::move(c));

  SubjectState s;
  const Vec2 dir = Vec2{-6.0, -15.0}.normalized();
  const Vec2 park{14.2, 10.9};
  s.body.pos = park - dir * 14.0;  // ~(19.4, 23.9)
  s.traj = SplineTrajectory::build({s.body.pos, park}, 1.8);
  w.subjects.push_back(std::move(s));
  return w;
}

}  // namespace

TEST_CASE("run_trial: single unobstructed agent hits the kinematic bound") {
  ScenarioConfig cfg;
  cfg.n_agents = 1;
  cfg.m_subjects = 0;
  cfg.n_walls = 0;
  // Pick the first seed whose start-goal distance is long enough for the
  // cruise phase to dominate startup and arrival transients.
  for (std::uint64_t seed = 1;; ++seed) {
    cfg.seed = seed;
    const WorldState w = generate_scenario(cfg);
    if (w.agents[0].path.total_length >= 15.0) break;
    REQUIRE(seed < 50);
  }
  const WorldState w = generate_scenario(cfg);
  const TrialResult r = run_trial(cfg, SchemeKind::NO_COMM);
  const double predicted = w.agents[0].path.total_length / cfg.agent_speed;
  CHECK_FALSE(r.timed_out);
  CHECK(r.makespan == doctest::Approx(predicted).epsilon(0.10));
}

TEST_CASE("run_trial: identical config and scheme reproduce bit-identical results") {
  ScenarioConfig cfg;
  cfg.seed = 2024;
  cfg.max_sim_time = 40.0;
  const TrialResult a = run_trial(cfg, SchemeKind::IKNAP);
  const TrialResult b = run_trial(cfg, SchemeKind::IKNAP);
  CHECK(a.makespan == b.makespan);
  CHECK(a.timed_out == b.timed_out);
  CHECK(a.agent_subject_collisions == b.agent_subject_collisions);
  CHECK(a.agent_agent_collisions == b.agent_agent_collisions);
  CHECK(a.deliveries_total == b.deliveries_total);
  CHECK(a.epochs.size() == b.epochs.size());
  for (std::size_t i = 0; i < a.epochs.size(); ++i) {
    CHECK(a.epochs[i].bandwidth_used == b.epochs[i].bandwidth_used);
    CHECK(a.epochs[i].chosen_count == b.epochs[i].chosen_count);
    CHECK(a.epochs[i].delivered_utility == b.epochs[i].delivered_utility);
  }
}

TEST_CASE("run_trial: occluded crossing subject, sharing stops the agent earlier") {
  ScenarioConfig cfg;
  cfg.max_sim_time = 60.0;
  cfg.seed = 7;
  // The hand-verified geometry below assumes these values.
  cfg.agent_speed = 1.5;
  cfg.collision_radius = 0.5;

  // The helper world must expose the intended occlusion: S hidden from A at
  // the start, visible to C.
  {
    const WorldState w = occlusion_world(cfg);
    CHECK_FALSE(is_visible(w.agents[0].body.pos, w.subjects[0].body.pos, w.walls));
    CHECK(is_visible(w.agents[1].body.pos, w.subjects[0].body.pos, w.walls));
    REQUIRE(w.agents[0].path.waypoints.size() == 2);  // straight path below the wall
  }

  // First time agent A's own collision assessment goes imminent.
  auto run_scheme = [&](SchemeKind scheme, double& first_imminent) {
    first_imminent = 1e300;
    TrialHooks hooks;
    hooks.on_tick = [&](const WorldState& w, const BeliefTable& beliefs) {
      if (first_imminent < 1e299) return;
      const AgentState& a = w.agents[0];
      const GaussianBelief b = predict_belief(
          beliefs.at(0, 0), w.time(), {cfg.process_noise_pos, cfg.process_noise_vel});
      std::vector<GaussianBelief> pb{b};
      const CollisionAssessment as = assess_collision(
          a.path, a.progress, pb, cfg.horizon, cfg.collision_radius, cfg.sim_dt,
          cfg.collision_samples);
      if (as.imminent) first_imminent = w.time();
    };
    return run_trial_world(occlusion_world(cfg), cfg, scheme, &hooks);
  };

  double iknap_first = 0.0, nocomm_first = 0.0;
  const TrialResult with_comm = run_scheme(SchemeKind::IKNAP, iknap_first);
  const TrialResult without = run_scheme(SchemeKind::NO_COMM, nocomm_first);

  // The relayed observation reached A.
  CHECK(with_comm.deliveries_total >= 1);
  // With sharing, A commits to a stop within a few seconds; without, the
  // subject stays hidden and A never reacts.
  CHECK(iknap_first < 5.0);
  CHECK(nocomm_first > cfg.max_sim_time);
  // Behavioral difference shows up in the recorded makespans.
  CHECK(with_comm.makespan != without.makespan);
  // The informed stop keeps clear of the subject.
  CHECK(with_comm.agent_subject_collisions == 0);
}

TEST_CASE("run_trial: belief of a never-observed subject changes only via delivery") {
  ScenarioConfig cfg;
  cfg.max_sim_time = 10.0;
  cfg.seed = 5;

  // Subject parked behind a wall relative to agent 0; agent 1 sees it.
  WorldState w;
  w.sim_dt = cfg.sim_dt;
  w.walls.push_back({{10.0, 18.0}, {10.0, 26.0}});
  AgentState a0;
  a0.body.pos = {2.0, 20.0};
  a0.goal = {2.0, 21.0};
  a0.path = plan_path(a0.body.pos, a0.goal, w.walls, cfg.clearance(), cfg.agent_speed);
  w.agents.push_back(std::move(a0));
  AgentState a1;
  a1.body.pos = {20.0, 20.0};
  a1.goal = {20.0, 21.0};
  a1.path = plan_path(a1.body.pos, a1.goal, w.walls, cfg.clearance(), cfg.agent_speed);
  w.agents.push_back(std::move(a1));
  SubjectState s;
  s.body.pos = {14.0, 22.0};
  s.traj = SplineTrajectory::build({{14.0, 22.0}, {14.5, 22.0}}, 0.1);
  w.subjects.push_back(std::move(s));

  // Agent 0 never sees the subject in this geometry.
  CHECK_FALSE(is_visible(w.agents[0].body.pos, w.subjects[0].body.pos, w.walls));

  bool changed_no_comm = false, changed_iknap = false;
  const GaussianBelief init = initial_belief(0, 0, cfg.field_size, cfg.subject_v_max);
  TrialHooks hooks;
  bool* flag = &changed_no_comm;
  hooks.on_tick = [&](const WorldState&, const BeliefTable& beliefs) {
    const GaussianBelief& b = beliefs.at(0, 0);
    if (b.pos_var.x != init.pos_var.x || b.pos_mean.x != init.pos_mean.x) *flag = true;
  };
  run_trial_world(w, cfg, SchemeKind::NO_COMM, &hooks);
  flag = &changed_iknap;
  run_trial_world(w, cfg, SchemeKind::IKNAP, &hooks);

  CHECK_FALSE(changed_no_comm);  // no own sightings, no deliveries
  CHECK(changed_iknap);          // agent 1's upload was relayed
}

TEST_CASE("run_sweep: singleton spec produces one row") {
  SweepSpec spec;
  spec.parameter = "none";
  spec.values = {0.0};
  spec.trials_per_value = 1;
  spec.schemes = {SchemeKind::NO_COMM};
  spec.base.n_agents = 1;
  spec.base.m_subjects = 0;
  spec.base.n_walls = 0;
  spec.base.max_sim_time = 60.0;
  const auto rows = run_sweep(spec, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == "ok");
  CHECK(rows[0].result.makespan > 0.0);
}

TEST_CASE("run_sweep: schemes share seeds and scenario digests per trial") {
  SweepSpec spec;
  spec.parameter = "none";
  spec.values = {0.0};
  spec.trials_per_value = 3;
  spec.schemes = {SchemeKind::IKNAP, SchemeKind::NO_COMM};
  spec.base.n_agents = 2;
  spec.base.m_subjects = 1;
  spec.base.n_walls = 2;
  spec.base.max_sim_time = 30.0;
  const auto rows = run_sweep(spec, 2);
  REQUIRE(rows.size() == 6);
  for (int t = 0; t < 3; ++t) {
    const TrialRow* iknap_row = nullptr;
    const TrialRow* nocomm_row = nullptr;
    for (const auto& r : rows) {
      if (r.trial_index != t) continue;
      (r.scheme == SchemeKind::IKNAP ? iknap_row : nocomm_row) = &r;
    }
    REQUIRE(iknap_row);
    REQUIRE(nocomm_row);
    CHECK(iknap_row->seed == nocomm_row->seed);
    CHECK(iknap_row->result.config_digest == nocomm_row->result.config_digest);
  }
}

TEST_CASE("run_sweep: capability sweep keeps sharing at least as fast per value") {
  SweepSpec spec;
  spec.parameter = "agent_subject_count";
  spec.values = {4, 10, 20};
  spec.trials_per_value = 12;
  spec.schemes = {SchemeKind::IKNAP, SchemeKind::NO_COMM};
  spec.base_seed = 1;
  const auto rows = run_sweep(spec);
  const auto aggs = aggregate_rows(rows);
  REQUIRE(aggs.size() == 6);
  for (int vi = 0; vi < 3; ++vi) {
    double iknap = -1, nocomm = -1;
    for (const auto& a : aggs)
      if (a.value_index == vi) (a.scheme == SchemeKind::IKNAP ? iknap : nocomm) = a.makespan_mean;
    CHECK(iknap <= nocomm);
  }
}

TEST_CASE("apply_sweep_value: direct and derived parameters") {
  ScenarioConfig base;
  CHECK(apply_sweep_value(base, "alpha", 0.5).alpha == doctest::Approx(0.5));
  CHECK(apply_sweep_value(base, "agent_subject_count", 20).n_agents == 10);
  CHECK(apply_sweep_value(base, "comm_frequency", 2.0).comm_period == doctest::Approx(0.5));
  CHECK(apply_sweep_value(base, "bandwidth_ratio", 5.0).bandwidth_limit == 25);
  CHECK(apply_sweep_value(base, "bandwidth_range", 9.0).pairwise_bandwidth_max == 10);
  CHECK_THROWS_AS((void)apply_sweep_value(base, "bogus", 1.0), ConfigError);
}

TEST_CASE("write_results: empty, counted, and round-tripped tables") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "iknap_csv_test";
  fs::create_directories(dir);
  const std::string trials_path = (dir / "trials.csv").string();
  const std::string agg_path = (dir / "aggregate.csv").string();

  write_trials_csv({}, trials_path);
  CHECK(slurp(trials_path) == std::string(kTrialsHeader) + "\n");

  SweepSpec spec;
  spec.parameter = "alpha";
  spec.values = {0.01, 0.05, 0.1};
  spec.trials_per_value = 2;
  spec.schemes = {SchemeKind::IKNAP, SchemeKind::NO_COMM};
  spec.base.n_agents = 1;
  spec.base.m_subjects = 1;
  spec.base.n_walls = 0;
  spec.base.max_sim_time = 20.0;
  const auto rows = run_sweep(spec, 2);
  REQUIRE(rows.size() == 12);

  write_trials_csv(rows, trials_path);
  const auto parsed = read_trials_csv(trials_path);
  REQUIRE(parsed.size() == 12);
  const std::string again_path = (dir / "trials2.csv").string();
  write_trials_csv(parsed, again_path);
  CHECK(slurp(trials_path) == slurp(again_path));

  const auto aggs = aggregate_rows(rows);
  CHECK(aggs.size() == 6);
  write_aggregate_csv(aggs, agg_path);
  CHECK(slurp(agg_path).rfind(kAggregateHeader, 0) == 0);

  // A status message containing commas survives the round trip.
  auto quirky = rows;
  quirky[0].status = "failed: a, b, and \"c\"";
  write_trials_csv(quirky, trials_path);
  const auto reparsed = read_trials_csv(trials_path);
  CHECK(reparsed[0].status == "failed: a, b, and \"c\"");

  const auto svg_path = (dir / "chart.svg").string();
  write_sweep_svg(aggs, svg_path);
  const std::string svg = slurp(svg_path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("load_sweep_file parses specs and rejects unknown keys") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "iknap_spec_test";
  fs::create_directories(dir);
  const std::string path = (dir / "spec.cfg").string();
  {
    std::ofstream out(path);
    out << "parameter = bandwidth_ratio\n"
        << "values = 1, 2, 5\n"
        << "trials_per_value = 4\n"
        << "schemes = iknap, no_comm\n"
        << "base_seed = 17\n"
        << "n_agents = 3\n";
  }
  const SweepSpec spec = load_sweep_file(path);
  CHECK(spec.parameter == "bandwidth_ratio");
  CHECK(spec.values == std::vector<double>{1, 2, 5});
  CHECK(spec.trials_per_value == 4);
  REQUIRE(spec.schemes.size() == 2);
  CHECK(spec.base_seed == 17);
  CHECK(spec.base.n_agents == 3);

  {
    std::ofstream out(path);
    out << "parameter = nonsense_param\nvalues = 1\n";
  }
  CHECK_THROWS_AS((void)load_sweep_file(path), ConfigError);
}
