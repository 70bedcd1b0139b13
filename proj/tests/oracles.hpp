#pragma once

// Test-only oracles, kept independent of the library's shortest-path
// implementations: exhaustive simple-path search with branch-and-bound
// pruning, and a complete-graph polygonal search on a refined grid.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp_test {

using fpp::IVec;
using fpp::Vec;
using fpp::WeightConfiguration;

// minimum over all simple lattice paths from x to y of the summed weights;
// prunes with the admissible bound a * remaining l1 distance
inline double enumerate_simple_paths(const WeightConfiguration& cfg, const IVec& x,
                                     const IVec& y) {
  const auto& box = cfg.box();
  const int d = box.dim();
  const double a = cfg.law().support_min();
  std::vector<char> visited(box.vertex_count(), 0);
  double best = std::numeric_limits<double>::infinity();
  long target = box.vertex_rank(y);

  std::function<void(const IVec&, double)> dfs = [&](const IVec& p, double cost) {
    long r = box.vertex_rank(p);
    if (r == target) {
      best = std::min(best, cost);
      return;
    }
    if (cost + a * fpp::l1_dist(p, y) >= best) return;
    visited[r] = 1;
    for (int axis = 0; axis < d; ++axis)
      for (int dir : {+1, -1}) {
        IVec q = p;
        q[axis] += dir;
        if (!box.contains(q) || visited[box.vertex_rank(q)]) continue;
        long slot = dir > 0 ? box.edge_slot(p, axis) : box.edge_slot(q, axis);
        dfs(q, cost + cfg.weight(slot));
      }
    visited[r] = 0;
  };
  dfs(x, 0.0);
  return best;
}

// polygonal-path infimum with breakpoints restricted to a refined grid
// (integer lattice refined m-fold, plus the query points' coordinates):
// complete graph, per-segment cost tau_e |dz| on a shared edge, b |dz|
// otherwise.  Exhaustive Dijkstra over all O(N^2) arcs.
inline double refined_polygonal_search(const WeightConfiguration& cfg, const Vec& x,
                                       const Vec& y, int refine) {
  const auto& box = cfg.box();
  const int d = box.dim();
  const double b = cfg.law().support_max();

  std::vector<std::vector<double>> coords(d);
  for (int i = 0; i < d; ++i) {
    for (long v = box.lower()[i] * refine; v <= box.upper()[i] * refine; ++v)
      coords[i].push_back(static_cast<double>(v) / refine);
    for (double q : {x[i], y[i]}) {
      bool dup = false;
      for (double c : coords[i])
        if (std::abs(c - q) < 1e-12) dup = true;
      if (!dup) coords[i].push_back(q);
    }
    std::sort(coords[i].begin(), coords[i].end());
  }
  std::vector<Vec> nodes;
  IVec idx(d, 0);
  while (true) {
    Vec p(d);
    for (int i = 0; i < d; ++i) p[i] = coords[i][idx[i]];
    nodes.push_back(p);
    int ax = d - 1;
    while (ax >= 0) {
      if (++idx[ax] < static_cast<long>(coords[ax].size())) break;
      idx[ax] = 0;
      --ax;
    }
    if (ax < 0) break;
  }

  // per-pair segment cost following the generalized definition
  auto seg_cost = [&](const Vec& p, const Vec& q) {
    double dist = fpp::l1_dist(p, q);
    if (dist == 0) return 0.0;
    // shared edge: all coordinates equal and integral except one, and both
    // points inside the same unit segment of that axis
    int moving = -1;
    bool on_edge = true;
    for (int i = 0; i < d; ++i) {
      if (p[i] != q[i]) {
        if (moving >= 0) {
          on_edge = false;
          break;
        }
        moving = i;
      } else if (p[i] != std::floor(p[i])) {
        on_edge = false;
        break;
      }
    }
    if (on_edge && moving >= 0) {
      double lo = std::min(p[moving], q[moving]);
      double hi = std::max(p[moving], q[moving]);
      long cell = static_cast<long>(std::floor(lo + 1e-12));
      if (hi <= cell + 1 + 1e-12) {
        IVec base(d);
        for (int i = 0; i < d; ++i)
          base[i] = i == moving ? cell : static_cast<long>(std::llround(p[i]));
        IVec top = base;
        top[moving] += 1;
        if (box.contains(base) && box.contains(top))
          return cfg.weight(box.edge_slot(base, moving)) * dist;
      }
    }
    return b * dist;
  };

  const std::size_t n = nodes.size();
  std::size_t src = n, dst = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (fpp::l1_dist(nodes[i], x) < 1e-12) src = i;
    if (fpp::l1_dist(nodes[i], y) < 1e-12) dst = i;
  }
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<char> done(n, 0);
  dist[src] = 0;
  for (std::size_t round = 0; round < n; ++round) {
    std::size_t u = n;
    double du = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && dist[i] < du) {
        du = dist[i];
        u = i;
      }
    if (u == n) break;
    done[u] = 1;
    if (u == dst) break;
    for (std::size_t v = 0; v < n; ++v)
      if (!done[v]) dist[v] = std::min(dist[v], du + seg_cost(nodes[u], nodes[v]));
  }
  return dist[dst];
}

}  // namespace fpp_test
