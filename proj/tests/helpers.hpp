#pragma once

#include <vector>

#include "iknap/belief.hpp"
#include "iknap/knapsack.hpp"
#include "iknap/rng.hpp"

namespace test {

inline iknap::GaussianBelief make_belief(iknap::Vec2 pos_mean, iknap::Vec2 vel_mean, double pos_var,
                                         double vel_var, double last_update = 0.0, int owner = 0,
                                         int subject = 0) {
  iknap::GaussianBelief b;
  b.owner = owner;
  b.subject = subject;
  b.pos_mean = pos_mean;
  b.vel_mean = vel_mean;
  b.pos_var = {pos_var, pos_var};
  b.vel_var = {vel_var, vel_var};
  b.last_update = last_update;
  return b;
}

inline iknap::Observation make_obs(iknap::Vec2 pos_mean, iknap::Vec2 vel_mean, double sigma,
                                   double time = 0.0, int observer = 0, int subject = 0) {
  iknap::Observation o;
  o.observer = observer;
  o.subject = subject;
  o.time = time;
  o.pos_mean = pos_mean;
  o.vel_mean = vel_mean;
  o.pos_sigma = {sigma, sigma};
  o.vel_sigma = {sigma, sigma};
  return o;
}

inline iknap::GaussianBelief random_belief(iknap::Rng& rng) {
  return make_belief({rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)},
                     {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)}, rng.uniform(0.2, 5.0),
                     rng.uniform(0.2, 5.0));
}

inline std::vector<iknap::CandidateComm> random_instance(iknap::Rng& rng, int max_n, int beta_max = 10) {
  const int n = static_cast<int>(rng.uniform_int(0, max_n));
  std::vector<iknap::CandidateComm> items(n);
  for (auto& c : items) {
    c.bandwidth = static_cast<int>(rng.uniform_int(1, beta_max));
    c.utility = rng.uniform(0.0, 10.0);
  }
  return items;
}

}  // namespace test
