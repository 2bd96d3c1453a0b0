#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "iknap/belief.hpp"
#include "iknap/geometry.hpp"
#include "iknap/knapsack.hpp"

namespace iknap::oracle {

/// Exhaustive 2^N search, independent of the dynamic program. N <= ~25.
struct BruteForceResult {
  double best_utility = 0.0;
  int best_bandwidth = 0;
};

inline BruteForceResult brute_force_knapsack(std::span<const CandidateComm> candidates, int budget) {
  const int n = static_cast<int>(candidates.size());
  BruteForceResult best;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double u = 0.0;
    int w = 0;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) {
        u += candidates[j].utility;
        w += candidates[j].bandwidth;
      }
    if (w > budget) continue;
    if (u > best.best_utility || (u == best.best_utility && w < best.best_bandwidth)) {
      best.best_utility = u;
      best.best_bandwidth = w;
    }
  }
  return best;
}

/// 1-D KL(p || q) between Gaussians by composite Simpson quadrature of
/// p(x) * ln(p(x)/q(x)) over a range wide enough for both distributions.
inline double kl_1d_quadrature(double mu_p, double var_p, double mu_q, double var_q,
                               int intervals = 40000) {
  const double sp = std::sqrt(var_p), sq = std::sqrt(var_q);
  const double lo = std::min(mu_p - 12.0 * sp, mu_q - 12.0 * sq);
  const double hi = std::max(mu_p + 12.0 * sp, mu_q + 12.0 * sq);
  const double h = (hi - lo) / intervals;

  auto integrand = [&](double x) {
    const double lp = -0.5 * (x - mu_p) * (x - mu_p) / var_p - 0.5 * std::log(6.283185307179586 * var_p);
    const double lq = -0.5 * (x - mu_q) * (x - mu_q) / var_q - 0.5 * std::log(6.283185307179586 * var_q);
    return std::exp(lp) * (lp - lq);
  };

  double sum = integrand(lo) + integrand(hi);
  for (int i = 1; i < intervals; ++i) sum += integrand(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Numerical KL over the stacked position+velocity axes of two beliefs.
inline double kl_quadrature(const GaussianBelief& post, const GaussianBelief& prior) {
  return kl_1d_quadrature(post.pos_mean.x, post.pos_var.x, prior.pos_mean.x, prior.pos_var.x) +
         kl_1d_quadrature(post.pos_mean.y, post.pos_var.y, prior.pos_mean.y, prior.pos_var.y) +
         kl_1d_quadrature(post.vel_mean.x, post.vel_var.x, prior.vel_mean.x, prior.vel_var.x) +
         kl_1d_quadrature(post.vel_mean.y, post.vel_var.y, prior.vel_mean.y, prior.vel_var.y);
}

/// Dense-grid shortest path with 16-connected moves, for checking planned
/// path lengths. Cells within `clearance` of a wall are blocked.
inline double grid_shortest_path(Vec2 start, Vec2 goal, std::span<const Wall> walls, double clearance,
                                 double lo_x, double lo_y, double size, double cell) {
  const int n = static_cast<int>(size / cell) + 1;
  auto id = [n](int ix, int iy) { return static_cast<std::size_t>(iy) * n + ix; };
  auto pos = [&](int ix, int iy) { return Vec2{lo_x + ix * cell, lo_y + iy * cell}; };

  std::vector<char> blocked(static_cast<std::size_t>(n) * n, 0);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const Vec2 p = pos(ix, iy);
      for (const Wall& w : walls)
        if (point_segment_distance(p, w.a, w.b) < clearance) {
          blocked[id(ix, iy)] = 1;
          break;
        }
    }

  auto nearest = [&](Vec2 p) {
    return std::pair<int, int>{static_cast<int>((p.x - lo_x) / cell + 0.5),
                               static_cast<int>((p.y - lo_y) / cell + 0.5)};
  };
  const auto [sx, sy] = nearest(start);
  const auto [gx, gy] = nearest(goal);

  static const int moves[16][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {1, -1},
                                   {-1, 1}, {-1, -1}, {2, 1}, {2, -1}, {-2, 1}, {-2, -1},
                                   {1, 2},  {1, -2},  {-1, 2}, {-1, -2}};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(n) * n, kInf);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  dist[id(sx, sy)] = 0.0;
  pq.push({0.0, id(sx, sy)});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == id(gx, gy)) break;
    const int ux = static_cast<int>(u % n), uy = static_cast<int>(u / n);
    for (const auto& mv : moves) {
      const int vx = ux + mv[0], vy = uy + mv[1];
      if (vx < 0 || vy < 0 || vx >= n || vy >= n) continue;
      const std::size_t v = id(vx, vy);
      if (blocked[v]) continue;
      // Knight moves must not hop over a blocked intermediate cell.
      if (std::abs(mv[0]) + std::abs(mv[1]) == 3 &&
          blocked[id(ux + mv[0] / 2 + mv[0] % 2, uy + mv[1] / 2 + mv[1] % 2)])
        continue;
      const double nd = d + cell * std::sqrt(double(mv[0] * mv[0] + mv[1] * mv[1]));
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.push({nd, v});
      }
    }
  }
  return dist[id(gx, gy)];
}

}  // namespace iknap::oracle
