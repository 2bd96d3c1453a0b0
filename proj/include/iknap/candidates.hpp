#pragma once

#include <cassert>
#include <vector>

#include "iknap/belief.hpp"
#include "iknap/knapsack.hpp"
#include "iknap/rng.hpp"
#include "iknap/utility.hpp"
#include "iknap/world.hpp"

namespace iknap {

/// Symmetric integer message costs per agent pair, sampled once per trial.
class BandwidthMatrix {
 public:
  BandwidthMatrix() = default;
  explicit BandwidthMatrix(int n_agents) : n_(n_agents), cost_(static_cast<std::size_t>(n_) * n_, 0) {}

  static BandwidthMatrix sample(int n_agents, int lo, int hi, Rng& rng) {
    BandwidthMatrix m(n_agents);
    for (int a = 0; a < n_agents; ++a)
      for (int b = a + 1; b < n_agents; ++b) {
        const int beta = static_cast<int>(rng.uniform_int(lo, hi));
        m.set(a, b, beta);
      }
    return m;
  }

  int at(int a, int b) const { return cost_[static_cast<std::size_t>(a) * n_ + b]; }
  void set(int a, int b, int beta) {
    cost_[static_cast<std::size_t>(a) * n_ + b] = beta;
    cost_[static_cast<std::size_t>(b) * n_ + a] = beta;
  }

  /// Cost of sending one broadcast from `a` to every other agent.
  int broadcast_cost(int a) const {
    int total = 0;
    for (int b = 0; b < n_; ++b)
      if (b != a) total += at(a, b);
    return total;
  }

  int agents() const { return n_; }

 private:
  int n_ = 0;
  std::vector<int> cost_;
};

/// Builds one candidate per (sender, receiver, subject) triple where the
/// sender holds a fresh observation of the subject. kappa is scored against
/// the receiver's current belief predicted to the observation time; tau rolls
/// the receiver along its plan against the sender's belief of the subject.
/// All inputs are data the agents upload: true subject states are never read.
inline std::vector<CandidateComm> enumerate_candidates(const WorldState& world,
                                                       const BeliefTable& beliefs,
                                                       const ObservationBuffer& fresh,
                                                       const BandwidthMatrix& bandwidth,
                                                       const UtilityParams& params, double sim_dt,
                                                       double now, ProcessNoise q = {}) {
  const int n = static_cast<int>(world.agents.size());
  const int m = beliefs.subjects();
  std::vector<CandidateComm> out;

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (int h = 0; h < m; ++h) {
        const auto& obs = fresh.at(a, h);
        if (!obs) continue;

        CandidateComm c;
        c.sender = a;
        c.receiver = b;
        c.subject = h;
        c.bandwidth = bandwidth.at(a, b);

        const GaussianBelief& receiver_prior = beliefs.at(b, h);
        const double t_fuse = std::max(obs->time, receiver_prior.last_update);
        c.kappa = kappa(*obs, predict_belief(receiver_prior, t_fuse, q));

        const GaussianBelief sender_now = predict_belief(beliefs.at(a, h), now, q);
        c.tau = tau(world.agents[b].path, world.agents[b].progress, sender_now, params, sim_dt);

        c.utility = utility(c.kappa / params.kappa_norm, c.tau, params);
        out.push_back(c);
      }
    }
  }
  assert(static_cast<int>(out.size()) <= n * (n - 1) * m);
  return out;
}

}  // namespace iknap
