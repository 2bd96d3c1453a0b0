#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "iknap/trial.hpp"

namespace iknap {

struct CalibrationResult {
  double percentile_value = 0.0;  // suggested kappa_norm
  std::size_t sample_count = 0;
  double max_kappa = 0.0;
};

/// Reproducible normalization procedure for the information-gain term: run
/// `trials` seeded runs under the pairwise scheme with kappa_norm = 1,
/// collect the raw kappa of every enumerated candidate, and report the given
/// percentile. The default config ships with the value this procedure yields
/// at the default settings.
inline CalibrationResult calibrate_kappa_norm(ScenarioConfig cfg, int trials = 20,
                                              double percentile = 95.0) {
  cfg.kappa_norm = 1.0;
  std::vector<double> kappas;

  const std::uint64_t base = derive_seed(cfg.seed, "calibration");
  for (int t = 0; t < trials; ++t) {
    ScenarioConfig trial_cfg = cfg;
    trial_cfg.seed = derive_seed(base, static_cast<std::uint64_t>(t));

    const UtilityParams params{trial_cfg.p1, trial_cfg.p2, trial_cfg.horizon,
                               trial_cfg.collision_radius, 1.0};
    const ProcessNoise q{trial_cfg.process_noise_pos, trial_cfg.process_noise_vel};
    Rng bw_rng(trial_cfg.seed, "bandwidth");
    const BandwidthMatrix bw = BandwidthMatrix::sample(
        trial_cfg.n_agents, trial_cfg.pairwise_bandwidth_min, trial_cfg.pairwise_bandwidth_max, bw_rng);

    TrialHooks hooks;
    hooks.on_epoch = [&](const WorldState& w, const BeliefTable& beliefs,
                         const ObservationBuffer& fresh) {
      const auto cands =
          enumerate_candidates(w, beliefs, fresh, bw, params, trial_cfg.sim_dt, w.time(), q);
      for (const CandidateComm& c : cands) kappas.push_back(c.kappa);
    };
    run_trial(trial_cfg, SchemeKind::IKNAP, &hooks);
  }

  CalibrationResult out;
  out.sample_count = kappas.size();
  if (kappas.empty()) return out;
  std::sort(kappas.begin(), kappas.end());
  const std::size_t idx = std::min(
      kappas.size() - 1,
      static_cast<std::size_t>(std::ceil(percentile / 100.0 * kappas.size())) - 1);
  out.percentile_value = kappas[idx];
  out.max_kappa = kappas.back();
  return out;
}

}  // namespace iknap
