#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace iknap {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full per-trial configuration. Every field can be set from a key/value
/// config file or a CLI flag of the same name; see config_fields().
struct ScenarioConfig {
  // Scenario composition.
  int n_agents = 5;
  int m_subjects = 5;
  int n_walls = 10;
  double field_size = 40.0;           // side of the square sampling region (m)
  double wall_length_min = 4.0;       // m
  double wall_length_max = 10.0;      // m

  // Perception.
  double alpha = 0.01;                // observation noise gain (m^3)
  double sigma_floor = 1e-3;          // lower bound on observation std dev
  double perceived_sigma_scale = 1.0; // self-assigned sigma = scale * true sigma
  double process_noise_pos = 0.05;    // belief position variance growth (m^2/s)
  double process_noise_vel = 0.05;    // belief velocity variance growth ((m/s)^2/s)

  // Communication.
  double comm_period = 1.0;           // epoch period delta-t (s)
  int bandwidth_limit = 25;           // per-epoch budget B (units)
  int pairwise_bandwidth_min = 1;     // units
  int pairwise_bandwidth_max = 10;    // units
  double bandwidth_quantum = 1.0;     // cost units per DP capacity step
  double utility_epsilon = 1e-9;      // candidates below this utility are dropped

  // Utility heuristic.
  double horizon = 5.0;               // forward-simulation horizon t_H (s)
  double p1 = 1.0;                    // weight on normalized information gain
  double p2 = 1.0;                    // weight on proximity relevance
  double kappa_norm = 60.7085;        // empirical 95th-percentile normalizer for kappa
                                      // (reproduce with: iknap calibrate --trials 20)

  // Dynamics and control.
  double sim_dt = 0.05;               // integration step (s)
  double max_sim_time = 120.0;        // trial cutoff T (s)
  double goal_tolerance = 0.3;        // arrival radius (m)
  double collision_radius = 1.0;      // contact distance between two bodies (m)
  double agent_speed = 2.0;           // agent target speed (m/s)
  double agent_v_max = 3.0;           // hard agent speed cap (m/s)
  double subject_speed_min = 0.5;     // subject target speed range (m/s)
  double subject_speed_max = 2.0;
  double subject_v_max = 3.0;         // hard subject speed cap (m/s)
  double accel_max = 3.0;             // acceleration cap (m/s^2)
  double kp = 4.0;                    // PD position gain
  double kd = 4.0;                    // PD velocity gain
  double speed_ramp = 1.0;            // reference slow-down distance before a stop (m)
  double stop_margin = 0.25;          // controller holdback before a stop point (m)
  double clearance_factor = 1.5;      // planner clearance = factor * collision_radius
  int collision_samples = 32;         // belief samples per collision assessment

  std::uint64_t seed = 1;

  double clearance() const { return clearance_factor * collision_radius; }
  int epoch_ticks() const {
    const double t = comm_period / sim_dt;
    return t < 1.0 ? 1 : static_cast<int>(t + 0.5);
  }
};

struct ConfigField {
  const char* name;
  const char* help;
  std::variant<int ScenarioConfig::*, double ScenarioConfig::*, std::uint64_t ScenarioConfig::*> member;
};

inline const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = {
      {"n_agents", "number of navigating agents", &ScenarioConfig::n_agents},
      {"m_subjects", "number of dynamic-obstacle subjects", &ScenarioConfig::m_subjects},
      {"n_walls", "number of wall segments", &ScenarioConfig::n_walls},
      {"field_size", "side of the square field (m)", &ScenarioConfig::field_size},
      {"wall_length_min", "minimum wall length (m)", &ScenarioConfig::wall_length_min},
      {"wall_length_max", "maximum wall length (m)", &ScenarioConfig::wall_length_max},
      {"alpha", "observation noise gain", &ScenarioConfig::alpha},
      {"sigma_floor", "minimum observation std dev", &ScenarioConfig::sigma_floor},
      {"perceived_sigma_scale", "perceived/true sigma ratio", &ScenarioConfig::perceived_sigma_scale},
      {"process_noise_pos", "position variance growth rate (m^2/s)", &ScenarioConfig::process_noise_pos},
      {"process_noise_vel", "velocity variance growth rate ((m/s)^2/s)", &ScenarioConfig::process_noise_vel},
      {"comm_period", "communication epoch period (s)", &ScenarioConfig::comm_period},
      {"bandwidth_limit", "per-epoch bandwidth budget B (units)", &ScenarioConfig::bandwidth_limit},
      {"pairwise_bandwidth_min", "minimum pairwise cost (units)", &ScenarioConfig::pairwise_bandwidth_min},
      {"pairwise_bandwidth_max", "maximum pairwise cost (units)", &ScenarioConfig::pairwise_bandwidth_max},
      {"bandwidth_quantum", "cost units per knapsack capacity step", &ScenarioConfig::bandwidth_quantum},
      {"utility_epsilon", "candidate pruning threshold", &ScenarioConfig::utility_epsilon},
      {"horizon", "utility forward-simulation horizon (s)", &ScenarioConfig::horizon},
      {"p1", "weight on information gain", &ScenarioConfig::p1},
      {"p2", "weight on proximity relevance", &ScenarioConfig::p2},
      {"kappa_norm", "kappa normalizer (95th percentile; see calibrate)", &ScenarioConfig::kappa_norm},
      {"sim_dt", "integration step (s)", &ScenarioConfig::sim_dt},
      {"max_sim_time", "trial cutoff (s)", &ScenarioConfig::max_sim_time},
      {"goal_tolerance", "arrival radius (m)", &ScenarioConfig::goal_tolerance},
      {"collision_radius", "contact distance (m)", &ScenarioConfig::collision_radius},
      {"agent_speed", "agent target speed (m/s)", &ScenarioConfig::agent_speed},
      {"agent_v_max", "agent speed cap (m/s)", &ScenarioConfig::agent_v_max},
      {"subject_speed_min", "subject target speed lower bound (m/s)", &ScenarioConfig::subject_speed_min},
      {"subject_speed_max", "subject target speed upper bound (m/s)", &ScenarioConfig::subject_speed_max},
      {"subject_v_max", "subject speed cap (m/s)", &ScenarioConfig::subject_v_max},
      {"accel_max", "acceleration cap (m/s^2)", &ScenarioConfig::accel_max},
      {"kp", "PD position gain", &ScenarioConfig::kp},
      {"kd", "PD velocity gain", &ScenarioConfig::kd},
      {"speed_ramp", "reference slow-down distance (m)", &ScenarioConfig::speed_ramp},
      {"stop_margin", "controller holdback before a stop point (m)", &ScenarioConfig::stop_margin},
      {"clearance_factor", "planner clearance / collision_radius", &ScenarioConfig::clearance_factor},
      {"collision_samples", "belief samples per collision assessment", &ScenarioConfig::collision_samples},
      {"seed", "trial random seed", &ScenarioConfig::seed},
  };
  return fields;
}

inline void set_config_field(ScenarioConfig& cfg, std::string_view name, const std::string& value) {
  for (const auto& f : config_fields()) {
    if (name != f.name) continue;
    try {
      std::size_t used = 0;
      if (auto pi = std::get_if<int ScenarioConfig::*>(&f.member)) {
        cfg.**pi = std::stoi(value, &used);
      } else if (auto pd = std::get_if<double ScenarioConfig::*>(&f.member)) {
        cfg.**pd = std::stod(value, &used);
      } else {
        cfg.*std::get<std::uint64_t ScenarioConfig::*>(f.member) = std::stoull(value, &used);
      }
      while (used < value.size() && std::isspace(static_cast<unsigned char>(value[used]))) ++used;
      if (used != value.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("invalid value for '" + std::string(name) + "': '" + value + "'");
    }
    return;
  }
  throw ConfigError("unknown config key '" + std::string(name) + "'");
}

inline std::string get_config_field(const ScenarioConfig& cfg, const ConfigField& f) {
  char buf[40];
  if (auto pi = std::get_if<int ScenarioConfig::*>(&f.member)) {
    std::snprintf(buf, sizeof(buf), "%d", cfg.**pi);
  } else if (auto pd = std::get_if<double ScenarioConfig::*>(&f.member)) {
    std::snprintf(buf, sizeof(buf), "%.17g", cfg.**pd);
  } else {
    std::snprintf(buf, sizeof(buf), "%llu",
                  static_cast<unsigned long long>(cfg.*std::get<std::uint64_t ScenarioConfig::*>(f.member)));
  }
  return buf;
}

inline void validate(const ScenarioConfig& c) {
  auto fail = [](const std::string& msg) { throw ConfigError("invalid config: " + msg); };
  if (c.n_agents < 0 || c.m_subjects < 0 || c.n_walls < 0) fail("counts must be >= 0");
  if (!(c.field_size > 0)) fail("field_size must be > 0");
  if (!(c.sim_dt > 0)) fail("sim_dt must be > 0");
  if (c.comm_period < c.sim_dt) fail("comm_period must be >= sim_dt");
  if (c.bandwidth_limit < 0) fail("bandwidth_limit must be >= 0");
  if (c.pairwise_bandwidth_min < 1) fail("pairwise_bandwidth_min must be >= 1");
  if (c.pairwise_bandwidth_max < c.pairwise_bandwidth_min)
    fail("pairwise_bandwidth_max must be >= pairwise_bandwidth_min");
  if (!(c.bandwidth_quantum > 0)) fail("bandwidth_quantum must be > 0");
  if (!(c.horizon > 0)) fail("horizon must be > 0");
  if (c.p1 < 0 || c.p2 < 0) fail("p1 and p2 must be >= 0");
  if (!(c.kappa_norm > 0)) fail("kappa_norm must be > 0");
  if (!(c.alpha >= 0)) fail("alpha must be >= 0");
  if (!(c.sigma_floor > 0)) fail("sigma_floor must be > 0");
  if (!(c.perceived_sigma_scale > 0)) fail("perceived_sigma_scale must be > 0");
  if (c.process_noise_pos < 0 || c.process_noise_vel < 0) fail("process noise must be >= 0");
  if (!(c.max_sim_time >= 0)) fail("max_sim_time must be >= 0");
  if (!(c.goal_tolerance > 0)) fail("goal_tolerance must be > 0");
  if (!(c.collision_radius > 0)) fail("collision_radius must be > 0");
  if (!(c.wall_length_min > 0) || c.wall_length_max < c.wall_length_min) fail("bad wall length range");
  if (!(c.agent_speed > 0) || !(c.agent_v_max >= c.agent_speed)) fail("bad agent speeds");
  if (!(c.subject_speed_min > 0) || c.subject_speed_max < c.subject_speed_min ||
      c.subject_v_max < c.subject_speed_max)
    fail("bad subject speeds");
  if (!(c.accel_max > 0)) fail("accel_max must be > 0");
  if (!(c.kp > 0) || !(c.kd > 0)) fail("gains must be > 0");
  if (!(c.speed_ramp > 0)) fail("speed_ramp must be > 0");
  if (c.stop_margin < 0) fail("stop_margin must be >= 0");
  if (!(c.clearance_factor > 0)) fail("clearance_factor must be > 0");
  if (c.collision_samples < 1 || c.collision_samples > 256)
    fail("collision_samples must be in [1, 256]");
}

/// Parses `key = value` lines; '#' starts a comment. Unknown keys are errors.
inline void apply_config_text(ScenarioConfig& cfg, std::istream& in, std::string_view origin) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const char* ws = " \t\r\n";
      const auto b = s.find_first_not_of(ws);
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(ws) - b + 1);
    };
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": expected 'key = value'");
    set_config_field(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
}

inline ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  apply_config_text(base, in, path);
  return base;
}

inline std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  for (const auto& f : config_fields()) out << f.name << " = " << get_config_field(cfg, f) << "\n";
  return out.str();
}

/// FNV-1a hash of the canonical serialization, as 16 hex chars.
inline std::string config_digest(const ScenarioConfig& cfg) {
  const std::string text = serialize_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace iknap
