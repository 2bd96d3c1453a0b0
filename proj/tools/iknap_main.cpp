// Command-line front end: single trials, parameter sweeps, the brute-force
// verification suites, and the kappa normalization procedure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "iknap/calibrate.hpp"
#include "iknap/iknap.hpp"
#include "iknap/oracle.hpp"

namespace fs = std::filesystem;
using namespace iknap;

namespace {

// Every config field becomes a --flag of the same name on the given command;
// values are applied on top of whatever --config loaded.
void add_config_flags(CLI::App* cmd, std::map<std::string, std::string>& overrides) {
  for (const auto& field : config_fields()) {
    const std::string name = field.name;
    cmd->add_option_function<std::string>(
           "--" + name, [&overrides, name](const std::string& v) { overrides[name] = v; },
           field.help)
        ->expected(1);
  }
}

ScenarioConfig build_config(const std::string& config_path,
                            const std::map<std::string, std::string>& overrides) {
  ScenarioConfig cfg;
  if (!config_path.empty()) cfg = load_config_file(config_path);
  for (const auto& [key, value] : overrides) set_config_field(cfg, key, value);
  validate(cfg);
  return cfg;
}

void print_trial(const TrialRow& row) {
  const TrialResult& r = row.result;
  std::printf("scheme            %s\n", scheme_name(r.scheme));
  std::printf("seed              %llu\n", static_cast<unsigned long long>(r.seed));
  std::printf("config digest     %s\n", r.config_digest.c_str());
  std::printf("makespan          %.3f s%s\n", r.makespan, r.timed_out ? " (timed out)" : "");
  std::printf("collisions        %d agent-subject, %d agent-agent\n", r.agent_subject_collisions,
              r.agent_agent_collisions);
  std::printf("epochs            %zu\n", r.epochs.size());
  std::printf("optimizer time    mean %.3g s, max %.3g s\n", r.opt_time_mean, r.opt_time_max);
  std::printf("bandwidth used    mean %.2f units/epoch\n", r.bandwidth_mean);
  std::printf("deliveries        %d\n", r.deliveries_total);
}

int run_oracle_suites(bool fast) {
  int failures = 0;
  auto report = [&](const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name, detail.empty() ? "" : ": ",
                detail.c_str());
    if (!ok) ++failures;
  };
  char buf[160];

  {  // Knapsack vs exhaustive search.
    const int instances = fast ? 200 : 1000;
    Rng rng(99, "oracle-knapsack");
    int bad = 0;
    for (int i = 0; i < instances; ++i) {
      std::vector<CandidateComm> items(rng.uniform_int(0, 15));
      for (auto& c : items) {
        c.bandwidth = static_cast<int>(rng.uniform_int(1, 10));
        c.utility = rng.uniform(0.0, 10.0);
      }
      const int budget = static_cast<int>(rng.uniform_int(0, 50));
      const SelectionResult dp = solve_knapsack(items, budget);
      const auto brute = oracle::brute_force_knapsack(items, budget);
      if (std::abs(dp.total_utility - brute.best_utility) >
          1e-9 * std::max(1.0, brute.best_utility))
        ++bad;
    }
    std::snprintf(buf, sizeof(buf), "%d instances, %d mismatches", instances, bad);
    report("knapsack exhaustive-search oracle", bad == 0, buf);
  }

  {  // KL closed form vs quadrature.
    Rng rng(100, "oracle-kl");
    double worst = 0.0;
    const int cases = fast ? 20 : 100;
    for (int i = 0; i < cases; ++i) {
      GaussianBelief p, q;
      p.pos_mean = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
      p.vel_mean = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
      p.pos_var = {rng.uniform(0.2, 5), rng.uniform(0.2, 5)};
      p.vel_var = {rng.uniform(0.2, 5), rng.uniform(0.2, 5)};
      q = p;
      q.pos_mean = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
      q.pos_var = {rng.uniform(0.2, 5), rng.uniform(0.2, 5)};
      q.vel_var = {rng.uniform(0.2, 5), rng.uniform(0.2, 5)};
      worst = std::max(worst, std::abs(kl_divergence(p, q) - oracle::kl_quadrature(p, q)));
    }
    std::snprintf(buf, sizeof(buf), "%d pairs, worst abs error %.2e", cases, worst);
    report("KL divergence quadrature oracle", worst < 1e-3, buf);
  }

  {  // Gaussian fusion precision additivity.
    Rng rng(101, "oracle-fusion");
    double worst = 0.0;
    for (int i = 0; i < (fast ? 2000 : 10000); ++i) {
      GaussianBelief prior;
      prior.pos_var = {rng.uniform(0.1, 9), rng.uniform(0.1, 9)};
      prior.vel_var = {rng.uniform(0.1, 9), rng.uniform(0.1, 9)};
      Observation obs;
      const double s = rng.uniform(0.05, 3.0);
      obs.pos_sigma = {s, s};
      obs.vel_sigma = {s, s};
      const GaussianBelief post = fuse(prior, obs);
      const double lhs = 1.0 / post.pos_var.x;
      const double rhs = 1.0 / prior.pos_var.x + 1.0 / (s * s);
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    std::snprintf(buf, sizeof(buf), "worst relative error %.2e", worst);
    report("fusion precision additivity", worst <= 1e-12, buf);
  }

  {  // Planner vs dense-grid shortest path.
    int checked = 0, bad = 0;
    for (std::uint64_t seed = 31; seed < (fast ? 33u : 36u); ++seed) {
      ScenarioConfig cfg;
      cfg.seed = seed;
      const WorldState w = generate_scenario(cfg);
      for (const AgentState& a : w.agents) {
        if (a.path.total_length < 1.0) continue;
        const double grid = oracle::grid_shortest_path(a.body.pos, a.goal, w.walls,
                                                       cfg.clearance() * 0.999, -5, -5, 50, 0.25);
        ++checked;
        if (!(std::abs(a.path.total_length - grid) <= 0.05 * grid)) ++bad;
      }
    }
    std::snprintf(buf, sizeof(buf), "%d paths, %d out of tolerance", checked, bad);
    report("visibility-graph planner grid oracle", bad == 0, buf);
  }

  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iknap: bandwidth-constrained observation sharing for multi-robot navigation"};
  app.require_subcommand(1);

  // --- run ---
  auto* run_cmd = app.add_subcommand("run", "run a single trial and print its result");
  std::string run_config, run_scheme = "iknap", run_out;
  std::map<std::string, std::string> run_overrides;
  run_cmd->add_option("--config", run_config, "config file (key = value lines)");
  run_cmd->add_option("--scheme", run_scheme, "iknap | broadcast | no_comm");
  run_cmd->add_option("--out", run_out, "directory for trials.csv");
  add_config_flags(run_cmd, run_overrides);

  // --- sweep ---
  auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep spec file across schemes");
  std::string sweep_spec_path, sweep_config, sweep_out = "results";
  int sweep_jobs = 0;
  bool sweep_fast = false, sweep_svg = false;
  sweep_cmd->add_option("--spec", sweep_spec_path, "sweep spec file")->required();
  sweep_cmd->add_option("--config", sweep_config, "base config file applied before the spec");
  sweep_cmd->add_option("--out", sweep_out, "output directory");
  sweep_cmd->add_option("--jobs", sweep_jobs, "worker threads (default: hardware)");
  sweep_cmd->add_flag("--fast", sweep_fast, "cap trials per value at 20");
  sweep_cmd->add_flag("--svg", sweep_svg, "also write a makespan chart");

  // --- oracle ---
  auto* oracle_cmd = app.add_subcommand("oracle", "run the brute-force verification suites");
  bool oracle_fast = false;
  oracle_cmd->add_flag("--fast", oracle_fast, "smaller instance counts");

  // --- calibrate ---
  auto* cal_cmd = app.add_subcommand("calibrate", "recompute the kappa_norm default");
  std::string cal_config;
  int cal_trials = 20;
  double cal_percentile = 95.0;
  std::map<std::string, std::string> cal_overrides;
  cal_cmd->add_option("--config", cal_config, "config file");
  cal_cmd->add_option("--trials", cal_trials, "calibration batch size");
  cal_cmd->add_option("--percentile", cal_percentile, "kappa percentile to report");
  add_config_flags(cal_cmd, cal_overrides);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const ScenarioConfig cfg = build_config(run_config, run_overrides);
      TrialRow row;
      row.parameter = "none";
      row.scheme = parse_scheme(run_scheme);
      row.seed = cfg.seed;
      row.result = run_trial(cfg, row.scheme);
      print_trial(row);
      if (!run_out.empty()) {
        fs::create_directories(run_out);
        write_trials_csv({row}, (fs::path(run_out) / "trials.csv").string());
        std::printf("wrote %s\n", (fs::path(run_out) / "trials.csv").string().c_str());
      }
      return 0;
    }

    if (*sweep_cmd) {
      ScenarioConfig base;
      if (!sweep_config.empty()) base = load_config_file(sweep_config);
      SweepSpec spec = load_sweep_file(sweep_spec_path, base);
      if (sweep_fast) spec.trials_per_value = std::min(spec.trials_per_value, 20);
      validate(spec.base);

      std::printf("sweep %s over %zu values, %d trials/value, %zu schemes\n",
                  spec.parameter.c_str(), spec.values.size(), spec.trials_per_value,
                  spec.schemes.size());
      const auto rows = run_sweep(spec, sweep_jobs);
      const auto aggs = aggregate_rows(rows);

      fs::create_directories(sweep_out);
      write_trials_csv(rows, (fs::path(sweep_out) / "trials.csv").string());
      write_aggregate_csv(aggs, (fs::path(sweep_out) / "aggregate.csv").string());
      if (sweep_svg) write_sweep_svg(aggs, (fs::path(sweep_out) / "makespan.svg").string());

      int failures = 0;
      for (const auto& r : rows)
        if (r.status != "ok") {
          ++failures;
          std::fprintf(stderr, "trial failed (value %g, %s, trial %d): %s\n", r.value,
                       scheme_name(r.scheme), r.trial_index, r.status.c_str());
        }
      for (const auto& a : aggs)
        std::printf("%-22s value %-8g %-10s makespan %7.2f +/- %5.2f s  (n=%d, completion %.0f%%)\n",
                    a.parameter.c_str(), a.value, scheme_name(a.scheme), a.makespan_mean,
                    a.makespan_stderr, a.trials, 100.0 * a.completion_rate);
      std::printf("wrote %s and aggregate.csv%s\n",
                  (fs::path(sweep_out) / "trials.csv").string().c_str(),
                  sweep_svg ? " and makespan.svg" : "");
      if (failures) std::printf("%d trial(s) failed and were excluded from aggregates\n", failures);
      return 0;
    }

    if (*oracle_cmd) return run_oracle_suites(oracle_fast);

    if (*cal_cmd) {
      const ScenarioConfig cfg = build_config(cal_config, cal_overrides);
      const CalibrationResult r = calibrate_kappa_norm(cfg, cal_trials, cal_percentile);
      std::printf("kappa samples     %zu\n", r.sample_count);
      std::printf("p%.0f kappa         %.6g\n", cal_percentile, r.percentile_value);
      std::printf("max kappa         %.6g\n", r.max_kappa);
      std::printf("suggested config  kappa_norm = %.6g\n", r.percentile_value);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
