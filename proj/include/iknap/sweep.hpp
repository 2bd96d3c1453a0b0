#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "iknap/trial.hpp"

namespace iknap {

/// A parameter sweep: one value list, a trial count per value, and the
/// schemes to compare. Trial k of every scheme shares the same derived seed,
/// so schemes are always compared on identical scenario instances.
struct SweepSpec {
  std::string parameter = "none";
  std::vector<double> values = {0.0};
  int trials_per_value = 100;
  std::vector<SchemeKind> schemes = {SchemeKind::IKNAP, SchemeKind::BROADCAST_BASELINE,
                                     SchemeKind::NO_COMM};
  ScenarioConfig base;
  std::uint64_t base_seed = 1;
};

/// Applies one swept value to a config. Besides every direct config field,
/// four derived parameters from the experiment designs are recognized:
///   agent_subject_count  n = m = value / 2; the bandwidth budget is rescaled
///                        to keep the base config's per-agent ratio
///   comm_frequency       comm_period = 1 / value
///   bandwidth_ratio      bandwidth_limit = value * n_agents
///   bandwidth_range      pairwise bandwidth in [1, 1 + value]
/// "none" leaves the config untouched.
inline ScenarioConfig apply_sweep_value(ScenarioConfig cfg, const std::string& parameter, double value) {
  if (parameter == "none") return cfg;
  if (parameter == "agent_subject_count") {
    const int half = static_cast<int>(value / 2.0 + 0.5);
    const double ratio =
        cfg.n_agents > 0 ? static_cast<double>(cfg.bandwidth_limit) / cfg.n_agents : 0.0;
    cfg.n_agents = half;
    cfg.m_subjects = half;
    cfg.bandwidth_limit = static_cast<int>(ratio * half + 0.5);
    return cfg;
  }
  if (parameter == "comm_frequency") {
    if (!(value > 0)) throw ConfigError("comm_frequency must be > 0");
    cfg.comm_period = 1.0 / value;
    return cfg;
  }
  if (parameter == "bandwidth_ratio") {
    cfg.bandwidth_limit = static_cast<int>(value * cfg.n_agents + 0.5);
    return cfg;
  }
  if (parameter == "bandwidth_range") {
    cfg.pairwise_bandwidth_min = 1;
    cfg.pairwise_bandwidth_max = 1 + static_cast<int>(value + 0.5);
    return cfg;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  set_config_field(cfg, parameter, buf);
  return cfg;
}

/// Seed for trial `trial` of value index `vi`; shared across schemes.
inline std::uint64_t sweep_trial_seed(std::uint64_t base_seed, int value_index, int trial) {
  return derive_seed(base_seed, static_cast<std::uint64_t>(value_index),
                     static_cast<std::uint64_t>(trial));
}

/// One sweep cell: a finished trial or a recorded failure (status != "ok").
struct TrialRow {
  std::string parameter;
  int value_index = 0;
  double value = 0.0;
  SchemeKind scheme = SchemeKind::NO_COMM;
  int trial_index = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";
  TrialResult result;
};

struct AggregateRow {
  std::string parameter;
  int value_index = 0;
  double value = 0.0;
  SchemeKind scheme = SchemeKind::NO_COMM;
  int trials = 0;
  int failures = 0;
  int timeouts = 0;
  double makespan_mean = 0.0;
  double makespan_stderr = 0.0;
  double completion_rate = 0.0;
  double agent_subject_collisions_mean = 0.0;
  double agent_agent_collisions_mean = 0.0;
  double opt_time_mean = 0.0;
  double bandwidth_mean = 0.0;
  double deliveries_mean = 0.0;
};

/// Runs every (value, scheme, trial) cell, dispatching trials across `jobs`
/// worker threads. Row order is by (value index, scheme, trial index)
/// regardless of completion order; failed trials carry their reason in
/// `status` and are excluded from aggregates.
inline std::vector<TrialRow> run_sweep(const SweepSpec& spec, int jobs = 0,
                                       const TrialHooks* hooks = nullptr) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;

  std::vector<TrialRow> rows;
  for (int vi = 0; vi < static_cast<int>(spec.values.size()); ++vi)
    for (SchemeKind scheme : spec.schemes)
      for (int t = 0; t < spec.trials_per_value; ++t) {
        TrialRow row;
        row.parameter = spec.parameter;
        row.value_index = vi;
        row.value = spec.values[vi];
        row.scheme = scheme;
        row.trial_index = t;
        row.seed = sweep_trial_seed(spec.base_seed, vi, t);
        rows.push_back(std::move(row));
      }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) return;
      TrialRow& row = rows[i];
      try {
        ScenarioConfig cfg = apply_sweep_value(spec.base, spec.parameter, row.value);
        cfg.seed = row.seed;
        row.result = run_trial(cfg, row.scheme, hooks);
      } catch (const std::exception& e) {
        row.status = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

inline std::vector<AggregateRow> aggregate_rows(const std::vector<TrialRow>& rows) {
  std::vector<AggregateRow> out;
  auto cell = [&](const TrialRow& r) -> AggregateRow& {
    for (AggregateRow& a : out)
      if (a.value_index == r.value_index && a.scheme == r.scheme) return a;
    AggregateRow a;
    a.parameter = r.parameter;
    a.value_index = r.value_index;
    a.value = r.value;
    a.scheme = r.scheme;
    out.push_back(a);
    return out.back();
  };

  for (const TrialRow& r : rows) {
    AggregateRow& a = cell(r);
    if (r.status != "ok") {
      ++a.failures;
      continue;
    }
    ++a.trials;
    a.makespan_mean += r.result.makespan;
    a.makespan_stderr += r.result.makespan * r.result.makespan;
    if (r.result.timed_out) ++a.timeouts;
    a.agent_subject_collisions_mean += r.result.agent_subject_collisions;
    a.agent_agent_collisions_mean += r.result.agent_agent_collisions;
    a.opt_time_mean += r.result.opt_time_mean;
    a.bandwidth_mean += r.result.bandwidth_mean;
    a.deliveries_mean += r.result.deliveries_total;
  }

  for (AggregateRow& a : out) {
    if (a.trials == 0) continue;
    const double n = a.trials;
    const double mean = a.makespan_mean / n;
    const double var = std::max(0.0, a.makespan_stderr / n - mean * mean);
    a.makespan_mean = mean;
    a.makespan_stderr = a.trials > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    a.completion_rate = 1.0 - static_cast<double>(a.timeouts) / n;
    a.agent_subject_collisions_mean /= n;
    a.agent_agent_collisions_mean /= n;
    a.opt_time_mean /= n;
    a.bandwidth_mean /= n;
    a.deliveries_mean /= n;
  }
  return out;
}

/// Reads a sweep spec file: `parameter`, `values` (comma separated),
/// `trials_per_value`, `schemes` (comma separated), `base_seed`, plus any
/// config keys as base-config overrides.
inline SweepSpec load_sweep_file(const std::string& path, ScenarioConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep file '" + path + "'");
  SweepSpec spec;
  spec.base = base;

  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    auto split = [&](const std::string& list) {
      std::vector<std::string> items;
      std::stringstream ss(list);
      std::string item;
      while (std::getline(ss, item, ',')) items.push_back(trim(item));
      return items;
    };

    if (key == "parameter") {
      spec.parameter = value;
    } else if (key == "values") {
      spec.values.clear();
      for (const std::string& v : split(value)) spec.values.push_back(std::stod(v));
      if (spec.values.empty()) throw ConfigError(path + ": empty values list");
    } else if (key == "trials_per_value") {
      spec.trials_per_value = std::stoi(value);
    } else if (key == "schemes") {
      spec.schemes.clear();
      for (const std::string& s : split(value)) spec.schemes.push_back(parse_scheme(s));
    } else if (key == "base_seed") {
      spec.base_seed = std::stoull(value);
    } else {
      set_config_field(spec.base, key, value);
    }
  }
  if (spec.parameter != "none" && spec.parameter != "agent_subject_count" &&
      spec.parameter != "comm_frequency" && spec.parameter != "bandwidth_ratio" &&
      spec.parameter != "bandwidth_range") {
    // Must be a real config field; probing once reports bad names early.
    ScenarioConfig probe = spec.base;
    apply_sweep_value(probe, spec.parameter, spec.values.front());
  }
  return spec;
}

}  // namespace iknap
