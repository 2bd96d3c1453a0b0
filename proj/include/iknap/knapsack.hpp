#pragma once

#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace iknap {

/// One potential directed communication: sender a's latest observation of
/// subject h, offered to receiver b, with integer bandwidth cost beta and
/// scored utility theta. kappa/tau keep the raw heuristic components for
/// logging and calibration.
struct CandidateComm {
  int sender = -1;
  int receiver = -1;
  int subject = -1;
  int bandwidth = 1;       // beta, integer units >= 1
  double utility = 0.0;    // theta, finite and >= 0
  double kappa = 0.0;      // raw information gain (pre-normalization)
  double tau = 0.0;        // proximity relevance
};

struct SelectionResult {
  std::vector<char> chosen;     // one flag per input candidate
  double total_utility = 0.0;
  int total_bandwidth = 0;
  double solve_time = 0.0;      // wall-clock seconds spent in the solver

  std::vector<int> chosen_indices() const {
    std::vector<int> idx;
    for (std::size_t i = 0; i < chosen.size(); ++i)
      if (chosen[i]) idx.push_back(static_cast<int>(i));
    return idx;
  }
};

/// Drops candidates whose utility is below eps. Shifts no optimum by more
/// than the summed epsilon.
inline std::vector<CandidateComm> prune_candidates(std::span<const CandidateComm> candidates, double eps) {
  std::vector<CandidateComm> kept;
  kept.reserve(candidates.size());
  for (const CandidateComm& c : candidates)
    if (c.utility >= eps) kept.push_back(c);
  return kept;
}

/// Exact 0/1 knapsack over the integer capacity axis 0..budget.
///
/// Dynamic program over item suffixes: for each item j (processed last to
/// first) and capacity c, the best achievable (utility, bandwidth) pair is
/// kept, ordered by utility descending then bandwidth ascending. A take/skip
/// decision bit per (item, capacity) cell drives reconstruction from the
/// front, which yields the maximum-utility selection with, among ties, the
/// lowest total bandwidth and then the lexicographically smallest index set.
/// Time O(N*B); space O(B) words plus the N*B/8-byte decision bitmap.
inline SelectionResult solve_knapsack(std::span<const CandidateComm> candidates, int budget) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = candidates.size();
  SelectionResult result;
  result.chosen.assign(n, 0);

  if (budget > 0 && n > 0) {
    const std::size_t caps = static_cast<std::size_t>(budget) + 1;
    std::vector<double> util(caps, 0.0);
    std::vector<int> band(caps, 0);
    std::vector<std::uint8_t> take((n * caps + 7) / 8, 0);

    for (std::size_t j = n; j-- > 0;) {
      const int beta = candidates[j].bandwidth;
      const double theta = candidates[j].utility;
      assert(beta >= 1 && theta >= 0.0 && std::isfinite(theta));
      // Descending capacity lets util/band update in place from the j+1 row.
      for (std::size_t c = caps; c-- > static_cast<std::size_t>(beta);) {
        const double u_take = theta + util[c - beta];
        const int b_take = beta + band[c - beta];
        if (u_take > util[c] || (u_take == util[c] && b_take <= band[c])) {
          util[c] = u_take;
          band[c] = b_take;
          const std::size_t bit = j * caps + c;
          take[bit >> 3] |= static_cast<std::uint8_t>(1u << (bit & 7));
        }
      }
    }

    std::size_t c = caps - 1;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t bit = j * caps + c;
      if (take[bit >> 3] & (1u << (bit & 7))) {
        result.chosen[j] = 1;
        result.total_utility += candidates[j].utility;
        result.total_bandwidth += candidates[j].bandwidth;
        c -= static_cast<std::size_t>(candidates[j].bandwidth);
      }
    }
    assert(result.total_bandwidth <= budget);
  }

  result.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace iknap
