#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "iknap/candidates.hpp"
#include "iknap/config.hpp"
#include "iknap/knapsack.hpp"

namespace iknap {

enum class SchemeKind { IKNAP, BROADCAST_BASELINE, NO_COMM };

inline const char* scheme_name(SchemeKind s) {
  switch (s) {
    case SchemeKind::IKNAP: return "iknap";
    case SchemeKind::BROADCAST_BASELINE: return "broadcast";
    case SchemeKind::NO_COMM: return "no_comm";
  }
  return "?";
}

inline SchemeKind parse_scheme(const std::string& name) {
  if (name == "iknap") return SchemeKind::IKNAP;
  if (name == "broadcast") return SchemeKind::BROADCAST_BASELINE;
  if (name == "no_comm") return SchemeKind::NO_COMM;
  throw ConfigError("unknown scheme '" + name + "' (expected iknap, broadcast or no_comm)");
}

/// Per-epoch record. optimizer_time covers candidate construction plus
/// selection (wall clock); delivered_utility is the summed theta of all
/// executed pairwise deliveries.
struct EpochLog {
  double time = 0.0;
  int candidate_count = 0;
  int chosen_count = 0;
  int bandwidth_used = 0;
  double optimizer_time = 0.0;
  int deliveries = 0;
  double delivered_utility = 0.0;
};

/// One selected broadcast: sender a sends its observation of subject h to
/// every other agent at cost sum_b beta_ab.
struct Broadcast {
  int sender = -1;
  int subject = -1;
  int cost = 0;
  double utility = 0.0;  // summed per-receiver theta
};

struct BroadcastSelection {
  std::vector<Broadcast> chosen;
  double total_utility = 0.0;
  int total_bandwidth = 0;
};

/// Cost-blind greedy stand-in for a broadcast-based scheme: aggregates the
/// pairwise candidates into per-(sender, subject) broadcasts, then picks them
/// in descending utility order, skipping any whose full cost no longer fits.
inline BroadcastSelection broadcast_select_from_candidates(std::span<const CandidateComm> candidates,
                                                           const BandwidthMatrix& bandwidth, int budget) {
  std::vector<Broadcast> pool;
  for (const CandidateComm& c : candidates) {
    auto it = std::find_if(pool.begin(), pool.end(), [&](const Broadcast& g) {
      return g.sender == c.sender && g.subject == c.subject;
    });
    if (it == pool.end()) {
      pool.push_back({c.sender, c.subject, bandwidth.broadcast_cost(c.sender), c.utility});
    } else {
      it->utility += c.utility;
    }
  }
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return pool[x].utility > pool[y].utility; });

  BroadcastSelection sel;
  int remaining = budget;
  for (std::size_t i : order) {
    if (pool[i].cost > remaining || pool[i].cost == 0) continue;
    remaining -= pool[i].cost;
    sel.total_bandwidth += pool[i].cost;
    sel.total_utility += pool[i].utility;
    sel.chosen.push_back(pool[i]);
  }
  return sel;
}

/// Standalone entry point that enumerates candidates itself, so its runtime
/// is directly comparable to the pairwise scheme's.
inline BroadcastSelection broadcast_select(const WorldState& world, const BeliefTable& beliefs,
                                           const ObservationBuffer& fresh, const BandwidthMatrix& bandwidth,
                                           int budget, const UtilityParams& params, double sim_dt,
                                           double now, ProcessNoise q = {}) {
  const auto candidates = enumerate_candidates(world, beliefs, fresh, bandwidth, params, sim_dt, now, q);
  return broadcast_select_from_candidates(candidates, bandwidth, budget);
}

namespace detail {

inline void quantize_costs(std::vector<CandidateComm>& candidates, int& budget, double quantum) {
  if (quantum == 1.0) return;
  budget = static_cast<int>(std::floor(budget / quantum));
  for (CandidateComm& c : candidates)
    c.bandwidth = std::max(1, static_cast<int>(std::llround(c.bandwidth / quantum)));
}

}  // namespace detail

/// One communication epoch: build candidates from the uploads, run the
/// scheme's selection under the bandwidth budget, then deliver each selected
/// observation by predict+fuse into the receiver's belief. Deliveries to the
/// same receiver fuse sequentially in candidate-index order.
inline EpochLog run_epoch(const WorldState& world, BeliefTable& beliefs, const ObservationBuffer& fresh,
                          SchemeKind scheme, const BandwidthMatrix& bandwidth, const UtilityParams& params,
                          const ScenarioConfig& cfg) {
  EpochLog log;
  log.time = world.time();
  if (scheme == SchemeKind::NO_COMM) return log;

  const ProcessNoise q{cfg.process_noise_pos, cfg.process_noise_vel};
  const auto t0 = std::chrono::steady_clock::now();

  auto deliver = [&](int sender, int receiver, int subject) {
    const Observation& obs = *fresh.at(sender, subject);
    GaussianBelief& belief = beliefs.at(receiver, subject);
    belief = fuse_at(belief, obs, q);
    ++log.deliveries;
  };

  const auto candidates =
      enumerate_candidates(world, beliefs, fresh, bandwidth, params, cfg.sim_dt, world.time(), q);
  log.candidate_count = static_cast<int>(candidates.size());

  if (scheme == SchemeKind::IKNAP) {
    auto pruned = prune_candidates(candidates, cfg.utility_epsilon);
    int budget = cfg.bandwidth_limit;
    detail::quantize_costs(pruned, budget, cfg.bandwidth_quantum);
    const SelectionResult sel = solve_knapsack(pruned, budget);
    log.optimizer_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (std::size_t i = 0; i < pruned.size(); ++i) {
      if (!sel.chosen[i]) continue;
      deliver(pruned[i].sender, pruned[i].receiver, pruned[i].subject);
      log.delivered_utility += pruned[i].utility;
      ++log.chosen_count;
    }
    log.bandwidth_used = sel.total_bandwidth;
  } else {
    const BroadcastSelection sel =
        broadcast_select_from_candidates(candidates, bandwidth, cfg.bandwidth_limit);
    log.optimizer_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (const Broadcast& g : sel.chosen) {
      for (int b = 0; b < static_cast<int>(world.agents.size()); ++b)
        if (b != g.sender) deliver(g.sender, b, g.subject);
      log.delivered_utility += g.utility;
    }
    log.chosen_count = static_cast<int>(sel.chosen.size());
    log.bandwidth_used = sel.total_bandwidth;
  }
  return log;
}

}  // namespace iknap
