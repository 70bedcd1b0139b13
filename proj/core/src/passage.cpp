#include "fpp/passage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Item = std::pair<double, long>;
using MinHeap = std::priority_queue<Item, std::vector<Item>, std::greater<Item>>;

}  // namespace

double GeodesicPath::l1_length() const {
  double s = 0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    s += l1_dist(points[i], points[i + 1]);
  return s;
}

// ---------------------------------------------------------------------------
// lattice engine

std::vector<double> lattice_distances(const WeightConfiguration& cfg,
                                      const std::vector<long>& source_ranks,
                                      const std::optional<LatticeBox>& restrict_to,
                                      std::vector<long>* parents) {
  const LatticeBox& box = cfg.box();
  const int d = box.dim();
  const long n = box.vertex_count();
  std::vector<double> dist(n, kInf);
  if (parents) parents->assign(n, -1);
  MinHeap heap;
  for (long s : source_ranks) {
    dist[s] = 0;
    heap.push({0.0, s});
  }
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    IVec p = box.vertex_at(u);
    if (restrict_to && !restrict_to->contains(p)) continue;
    for (int a = 0; a < d; ++a) {
      for (int dir : {+1, -1}) {
        IVec q = p;
        q[a] += dir;
        if (!box.contains(q)) continue;
        if (restrict_to && !restrict_to->contains(q)) continue;
        long slot = dir > 0 ? box.edge_slot(p, a) : box.edge_slot(q, a);
        double alt = du + cfg.weight(slot);
        long v = box.vertex_rank(q);
        if (alt < dist[v]) {
          dist[v] = alt;
          if (parents) (*parents)[v] = u;
          heap.push({alt, v});
        }
      }
    }
  }
  return dist;
}

PassageResult discrete_passage_time(const WeightConfiguration& cfg, const IVec& x,
                                    const IVec& y) {
  const LatticeBox& box = cfg.box();
  if (!box.contains(x) || !box.contains(y))
    throw invalid_input("discrete_passage_time: endpoint outside box");
  std::vector<long> parents;
  auto dist = lattice_distances(cfg, {box.vertex_rank(x)}, std::nullopt, &parents);
  long t = box.vertex_rank(y);
  PassageResult out;
  out.time = dist[t];
  std::vector<long> chain;
  for (long v = t; v != -1; v = parents[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    out.path.points.push_back(to_real(box.vertex_at(chain[i])));
    if (i > 0)
      out.path.segment_times.push_back(dist[chain[i]] - dist[chain[i - 1]]);
  }
  out.path.total_time = out.time;
  return out;
}

// ---------------------------------------------------------------------------
// Hanan grid engine
//
// Node coordinates along each axis are the lattice integers in range plus
// the query points' fractional coordinates (and, for box windows, the
// window face coordinates).  The infimum over polygonal sequences is
// attained on this grid: free moves cost b per unit length independently of
// the transverse offset, so an optimal path can be slid axis by axis until
// every offset sits on a lattice line, a query coordinate or a window face.

namespace {

class HananGraph {
 public:
  HananGraph(const WeightConfiguration& cfg, const ConvexWindow* window,
             const std::vector<Vec>& extra_points)
      : cfg_(cfg), box_(cfg.box()), d_(cfg.box().dim()) {
    b_ = cfg.law().support_max();
    Vec lo(d_), hi(d_);
    if (window) {
      window->bounds(lo, hi);
      for (int i = 0; i < d_; ++i) {
        if (lo[i] < box_.lower()[i] - 1e-9 || hi[i] > box_.upper()[i] + 1e-9)
          throw invalid_input("window exceeds the configuration box");
        lo[i] = std::max(lo[i], static_cast<double>(box_.lower()[i]));
        hi[i] = std::min(hi[i], static_cast<double>(box_.upper()[i]));
      }
    } else {
      for (int i = 0; i < d_; ++i) {
        lo[i] = static_cast<double>(box_.lower()[i]);
        hi[i] = static_cast<double>(box_.upper()[i]);
      }
    }
    coords_.resize(d_);
    for (int i = 0; i < d_; ++i) {
      for (long v = static_cast<long>(std::ceil(lo[i] - 1e-9));
           v <= static_cast<long>(std::floor(hi[i] + 1e-9)); ++v)
        coords_[i].push_back(static_cast<double>(v));
      auto add = [&](double c) {
        if (c < lo[i] - 1e-9 || c > hi[i] + 1e-9) return;
        double r = std::round(c);
        if (std::abs(c - r) < 1e-9) return;  // integer already present
        coords_[i].push_back(c);
      };
      for (const Vec& p : extra_points) add(p[i]);
      add(lo[i]);
      add(hi[i]);
      std::sort(coords_[i].begin(), coords_[i].end());
      coords_[i].erase(std::unique(coords_[i].begin(), coords_[i].end(),
                                   [](double x, double y) {
                                     return std::abs(x - y) < 1e-12;
                                   }),
                       coords_[i].end());
    }
    strides_.assign(d_, 1);
    for (int i = d_ - 2; i >= 0; --i)
      strides_[i] = strides_[i + 1] * static_cast<long>(coords_[i + 1].size());
    n_ = strides_[0] * static_cast<long>(coords_[0].size());

    admitted_.assign(n_, 1);
    if (window) {
      for (long u = 0; u < n_; ++u)
        if (!window->contains(point(u), 1e-12)) admitted_[u] = 0;
    }
  }

  long size() const { return n_; }

  Vec point(long u) const {
    Vec x(d_);
    for (int i = 0; i < d_; ++i) {
      x[i] = coords_[i][u / strides_[i] % coords_[i].size()];
    }
    return x;
  }

  long node(const Vec& x) const {
    long u = 0;
    for (int i = 0; i < d_; ++i) {
      auto& cs = coords_[i];
      auto it = std::lower_bound(cs.begin(), cs.end(), x[i] - 1e-9);
      if (it == cs.end() || std::abs(*it - x[i]) > 1e-9)
        throw invalid_input("point is not on the Hanan grid");
      u += (it - cs.begin()) * strides_[i];
    }
    return u;
  }

  std::vector<double> distances(long source, std::vector<long>* parents) const {
    std::vector<double> dist(n_, kInf);
    if (parents) parents->assign(n_, -1);
    MinHeap heap;
    dist[source] = 0;
    heap.push({0.0, source});
    IVec mi(d_);
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (du > dist[u]) continue;
      for (int i = 0; i < d_; ++i)
        mi[i] = u / strides_[i] % static_cast<long>(coords_[i].size());
      for (int a = 0; a < d_; ++a) {
        for (int dir : {+1, -1}) {
          long ca = mi[a] + dir;
          if (ca < 0 || ca >= static_cast<long>(coords_[a].size())) continue;
          long v = u + dir * strides_[a];
          if (!admitted_[v]) continue;
          double c1 = coords_[a][std::min(mi[a], ca)];
          double c2 = coords_[a][std::max(mi[a], ca)];
          double alt = du + arc_cost(mi, a, c1, c2);
          if (alt < dist[v]) {
            dist[v] = alt;
            if (parents) (*parents)[v] = u;
            heap.push({alt, v});
          }
        }
      }
    }
    return dist;
  }

 private:
  double arc_cost(const IVec& mi, int axis, double c1, double c2) const {
    const double len = c2 - c1;
    IVec base(d_);
    for (int i = 0; i < d_; ++i) {
      if (i == axis) continue;
      double c = coords_[i][mi[i]];
      double r = std::round(c);
      if (std::abs(c - r) > 1e-12) return b_ * len;  // off every edge
      base[i] = static_cast<long>(r);
    }
    base[axis] = static_cast<long>(std::floor(c1 + 1e-12));
    IVec upper = base;
    upper[axis] += 1;
    if (!box_.contains(base) || !box_.contains(upper)) return b_ * len;
    return cfg_.weight(base, axis) * len;
  }

  const WeightConfiguration& cfg_;
  const LatticeBox& box_;
  int d_;
  double b_;
  std::vector<std::vector<double>> coords_;
  std::vector<long> strides_;
  long n_ = 0;
  std::vector<char> admitted_;
};

GeodesicPath extract_path(const HananGraph& g, const std::vector<double>& dist,
                          const std::vector<long>& parents, long target) {
  GeodesicPath path;
  std::vector<long> chain;
  for (long v = target; v != -1; v = parents[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    path.points.push_back(g.point(chain[i]));
    if (i > 0) path.segment_times.push_back(dist[chain[i]] - dist[chain[i - 1]]);
  }
  path.total_time = dist[target];
  return path;
}

}  // namespace

PassageResult continuous_passage_time_with_path(const WeightConfiguration& cfg,
                                                const Vec& x, const Vec& y) {
  if (!cfg.box().contains_real(x) || !cfg.box().contains_real(y))
    throw invalid_input("continuous_passage_time: endpoint outside box");
  HananGraph g(cfg, nullptr, {x, y});
  std::vector<long> parents;
  auto dist = g.distances(g.node(x), &parents);
  long t = g.node(y);
  PassageResult out;
  out.time = dist[t];
  out.path = extract_path(g, dist, parents, t);
  return out;
}

double continuous_passage_time(const WeightConfiguration& cfg, const Vec& x,
                               const Vec& y) {
  return continuous_passage_time_with_path(cfg, x, y).time;
}

BoxPassage box_passage_time(const WeightConfiguration& cfg, const ConvexWindow& window,
                            const Vec& x, const Vec& y) {
  if (!window.contains(x, 1e-9) || !window.contains(y, 1e-9))
    throw invalid_input("box_passage_time: endpoint outside window");
  HananGraph g(cfg, &window, {x, y});
  auto dist = g.distances(g.node(x), nullptr);
  BoxPassage out;
  out.time = dist[g.node(y)];
  if (!std::isfinite(out.time))
    throw internal_invariant_violation("box_passage_time: window disconnected");
  out.exact = window.is_box();
  out.boundary_slack =
      window.is_box() ? 0.0 : 2.0 * window.dim() * cfg.law().support_max();
  return out;
}

GridMetric rescaled_metric(const WeightConfiguration& cfg, const ConvexWindow& window,
                           int n, int k) {
  if (n < 1 || k < 1) throw invalid_input("rescaled_metric: need n, k >= 1");
  ConvexWindow scaled = window.scaled(static_cast<double>(n));
  Vec lo, hi;
  scaled.bounds(lo, hi);
  for (int i = 0; i < window.dim(); ++i)
    if (lo[i] < cfg.box().lower()[i] - 1e-9 || hi[i] > cfg.box().upper()[i] + 1e-9)
      throw invalid_input("rescaled_metric: box too small for nX");

  GridMetric D = GridMetric::sample(window, k, cfg.law().support_min(),
                                    cfg.law().support_max(),
                                    [](const Vec&, const Vec&) { return 0.0; });
  std::vector<Vec> scaled_pts;
  for (int i = 0; i < D.size(); ++i)
    scaled_pts.push_back(static_cast<double>(n) * D.point(i));

  HananGraph g(cfg, &scaled, scaled_pts);
  const double inv_n = 1.0 / n;
  for (int s = 0; s < D.size(); ++s) {
    auto dist = g.distances(g.node(scaled_pts[s]), nullptr);
    for (int t = s + 1; t < D.size(); ++t) {
      double v = dist[g.node(scaled_pts[t])];
      if (!std::isfinite(v))
        throw internal_invariant_violation("rescaled_metric: window disconnected");
      D.set_value(s, t, inv_n * v);
    }
  }
  // any envelope escape means a broken graph; abort loudly
  const double tol = 1e-9 * D.bound_b();
  for (int s = 0; s < D.size(); ++s)
    for (int t = s + 1; t < D.size(); ++t) {
      double l1 = l1_dist(D.point(s), D.point(t));
      if (D.value(s, t) < D.bound_a() * l1 - tol ||
          D.value(s, t) > D.bound_b() * l1 + tol)
        throw internal_invariant_violation("rescaled_metric: envelope violation");
    }
  return D;
}

CrossingTimes crossing_times(const WeightConfiguration& cfg, int n) {
  const LatticeBox& box = cfg.box();
  const int d = box.dim();
  IVec lo(d, 0), hi(d, n);
  for (int i = 0; i < d; ++i)
    if (box.lower()[i] > 0 || box.upper()[i] < n)
      throw invalid_input("crossing_times: box smaller than [0,n]^d");
  LatticeBox cube(lo, hi);
  CrossingTimes out;
  out.n = n;
  out.values.assign(d, 0.0);
  for (int axis = 0; axis < d; ++axis) {
    // gather the two faces
    std::vector<long> sources;
    double best = kInf;
    const long cube_count = cube.vertex_count();
    for (long r = 0; r < cube_count; ++r) {
      IVec p = cube.vertex_at(r);
      if (p[axis] == 0) sources.push_back(box.vertex_rank(p));
    }
    auto dist = lattice_distances(cfg, sources, cube, nullptr);
    for (long r = 0; r < cube_count; ++r) {
      IVec p = cube.vertex_at(r);
      if (p[axis] == n) best = std::min(best, dist[box.vertex_rank(p)]);
    }
    out.values[axis] = best / n;
  }
  return out;
}

GrowingBall growing_ball(const WeightConfiguration& cfg, int n, double mesh) {
  const double a = cfg.law().support_min();
  if (!(a > 0))
    throw invalid_input("growing_ball: law must be bounded away from 0");
  if (!(mesh > 0)) throw invalid_input("growing_ball: mesh must be > 0");
  const LatticeBox& box = cfg.box();
  const int d = box.dim();
  const long radius = static_cast<long>(std::ceil(n / a));
  for (int i = 0; i < d; ++i)
    if (box.lower()[i] > -radius || box.upper()[i] < radius)
      throw invalid_input("growing_ball: box must cover [-ceil(n/a), ceil(n/a)]^d");

  // snap the mesh so that n * x lands on the lattice
  long step = std::max<long>(1, std::lround(mesh * n));
  GrowingBall out;
  out.mesh = static_cast<double>(step) / n;

  auto dist = lattice_distances(cfg, {box.vertex_rank(IVec(d, 0))}, std::nullopt,
                                nullptr);
  // scan mesh multiples within the l1 ball of radius 1/a
  IVec v(d, -(radius / step));
  const long m = radius / step;
  while (true) {
    long l1 = 0;
    for (long c : v) l1 += std::labs(c) * step;
    if (l1 <= radius) {
      IVec p(d);
      for (int i = 0; i < d; ++i) p[i] = v[i] * step;
      if (box.contains(p) && dist[box.vertex_rank(p)] <= static_cast<double>(n)) {
        Vec x(d);
        for (int i = 0; i < d; ++i) x[i] = static_cast<double>(p[i]) / n;
        out.points.push_back(x);
      }
    }
    int ax = d - 1;
    while (ax >= 0) {
      if (++v[ax] <= m) break;
      v[ax] = -m;
      --ax;
    }
    if (ax < 0) break;
  }
  return out;
}

}  // namespace fpp
