#include "fpp/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dijkstra on an explicit adjacency list; deterministic tie order by node id
std::vector<double> dijkstra(int n, const std::vector<std::vector<std::pair<int, double>>>& adj,
                             int source) {
  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[source] = 0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    for (auto [v, w] : adj[u]) {
      double alt = du + w;
      if (alt < dist[v]) {
        dist[v] = alt;
        heap.push({alt, v});
      }
    }
  }
  return dist;
}

// gcd of absolute index steps, for collinear decomposition
long ivec_gcd(const IVec& d) {
  long g = 0;
  for (long v : d) g = std::gcd(g, std::labs(v));
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// GridMetric

GridMetric GridMetricBuilder::subset(const GridMetric& base,
                                     const ConvexWindow& window,
                                     const std::vector<int>& keep) {
  GridMetric out;
  out.window_ = window;
  out.k_ = base.k_;
  out.a_ = base.a_;
  out.b_ = base.b_;
  out.origin_ = base.origin_;
  out.step_ = base.step_;
  for (std::size_t ii = 0; ii < keep.size(); ++ii) {
    out.lookup_[base.multi_index(keep[ii])] = static_cast<int>(ii);
    out.pts_.push_back(base.point(keep[ii]));
    out.idx_.push_back(base.multi_index(keep[ii]));
  }
  out.vals_.assign(keep.size() * keep.size(), 0.0);
  return out;
}

void GridMetric::build_grid(const ConvexWindow& window, int k) {
  window_ = window;
  k_ = k;
  const int d = window.dim();
  Vec lo, hi;
  window.bounds(lo, hi);
  origin_ = lo;
  step_.assign(d, 0.0);
  for (int i = 0; i < d; ++i) step_[i] = (hi[i] - lo[i]) / k;
  IVec v(d, 0);
  while (true) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = origin_[i] + v[i] * step_[i];
    if (window.contains(x, 1e-12)) {
      lookup_[v] = static_cast<int>(pts_.size());
      pts_.push_back(x);
      idx_.push_back(v);
    }
    int ax = d - 1;
    while (ax >= 0) {
      if (++v[ax] <= k) break;
      v[ax] = 0;
      --ax;
    }
    if (ax < 0) break;
  }
  if (pts_.empty()) throw invalid_input("GridMetric: window contains no grid point");
  vals_.assign(pts_.size() * pts_.size(), 0.0);
}

GridMetric GridMetric::sample(const ConvexWindow& window, int k, double a, double b,
                              const std::function<double(const Vec&, const Vec&)>& fn) {
  if (k < 1) throw invalid_input("GridMetric::sample: k must be >= 1");
  GridMetric D;
  D.build_grid(window, k);
  D.a_ = a;
  D.b_ = b;
  const int n = D.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = fn(D.pts_[i], D.pts_[j]);
      D.vals_[i * n + j] = v;
      D.vals_[j * n + i] = v;
    }
  return D;
}

GridMetric GridMetric::from_norm(const ConvexWindow& window, int k, double a, double b,
                                 const Seminorm& g) {
  return sample(window, k, a, b,
                [&](const Vec& x, const Vec& y) { return g(x - y); });
}

double GridMetric::max_step() const {
  return *std::max_element(step_.begin(), step_.end());
}

double GridMetric::interpolation_slack() const { return 2.0 * b_ / k_; }

int GridMetric::find(const Vec& x, double tol) const {
  IVec v(window_.dim());
  for (int i = 0; i < window_.dim(); ++i) {
    double t = (x[i] - origin_[i]) / step_[i];
    v[i] = std::lround(t);
    if (std::abs(t - v[i]) * step_[i] > tol) return -1;
  }
  return find(v);
}

int GridMetric::find(const IVec& multi_index) const {
  auto it = lookup_.find(multi_index);
  return it == lookup_.end() ? -1 : it->second;
}

double GridMetric::value_at(const Vec& x, const Vec& y) const {
  int i = find(x), j = find(y);
  if (i < 0 || j < 0) throw invalid_input("value_at: point is not a grid sample");
  return value(i, j);
}

bool GridMetric::same_grid(const GridMetric& o) const {
  if (size() != o.size()) return false;
  for (int i = 0; i < size(); ++i)
    if (l1_dist(pts_[i], o.pts_[i]) > 1e-12) return false;
  return true;
}

std::optional<std::string> validate_grid_metric(const GridMetric& D,
                                                int triangle_exhaustive_limit) {
  const int n = D.size();
  const double tol = 1e-9 * std::max(1.0, D.bound_b());
  for (int i = 0; i < n; ++i) {
    if (D.value(i, i) != 0.0) return "nonzero diagonal at " + std::to_string(i);
    for (int j = i + 1; j < n; ++j) {
      double v = D.value(i, j);
      if (v != D.value(j, i)) return "asymmetry";
      double l1 = l1_dist(D.point(i), D.point(j));
      if (v < D.bound_a() * l1 - tol) return "below a-envelope";
      if (v > D.bound_b() * l1 + tol) return "above b-envelope";
    }
  }
  // triangle inequality: exhaustive for small grids, sampled otherwise
  auto check = [&](int i, int j, int k) -> bool {
    return D.value(i, j) <= D.value(i, k) + D.value(k, j) + tol;
  };
  long limit3 = static_cast<long>(triangle_exhaustive_limit) *
                triangle_exhaustive_limit * triangle_exhaustive_limit;
  if (static_cast<long>(n) * n * n <= limit3 * 64) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (!check(i, j, k)) return "triangle violation";
  } else {
    std::uint64_t s = 0x9e3779b97f4a7c15ULL;
    auto next = [&s]() {
      s ^= s << 13;
      s ^= s >> 7;
      s ^= s << 17;
      return s;
    };
    for (int t = 0; t < 200000; ++t) {
      int i = static_cast<int>(next() % n), j = static_cast<int>(next() % n),
          k = static_cast<int>(next() % n);
      if (!check(i, j, k)) return "triangle violation (sampled)";
    }
  }
  return std::nullopt;
}

double uniform_distance(const GridMetric& D1, const GridMetric& D2) {
  if (!D1.same_grid(D2))
    throw invalid_input("uniform_distance: mismatched grids");
  double m = 0;
  const int n = D1.size();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      m = std::max(m, std::abs(D1.value(i, j) - D2.value(i, j)));
  return m;
}

double midpoint_defect(const GridMetric& D) {
  // pairs whose index midpoint lies on the grid, so a geodesic metric with
  // exact midpoints scores 0; the absolute value additionally flags entries
  // inflated past the triangle inequality
  const int n = D.size();
  const int d = D.window().dim();
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool has_mid = true;
      for (int t = 0; t < d; ++t)
        if ((D.multi_index(i)[t] + D.multi_index(j)[t]) % 2 != 0) has_mid = false;
      if (!has_mid) continue;
      double best = kInf;
      for (int k = 0; k < n; ++k)
        best = std::min(best, std::max(D.value(i, k), D.value(k, j)));
      worst = std::max(worst, std::abs(best - 0.5 * D.value(i, j)));
    }
  return worst;
}

double extend_metric(const GridMetric& D, const Vec& x, const Vec& y) {
  const int n = D.size();
  const double b = D.bound_b();
  double best = b * l1_dist(x, y);
  // precompute b-distances from x and y to the samples
  std::vector<double> dx(n), dy(n);
  for (int i = 0; i < n; ++i) {
    dx[i] = b * l1_dist(x, D.point(i));
    dy[i] = b * l1_dist(y, D.point(i));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      best = std::min(best, dx[i] + D.value(i, j) + dy[j]);
  return best;
}

GradientEstimate estimate_gradient(const GridMetric& D, const Vec& z,
                                   const std::vector<Vec>& directions,
                                   const std::vector<double>& h_sequence) {
  if (h_sequence.empty()) throw invalid_input("estimate_gradient: empty h sequence");
  GradientEstimate out;
  out.directions = directions;
  out.boundary = !D.window().contains(z, -1e-9);  // not strictly interior
  for (const Vec& u : directions) {
    double un = l1_norm(u);
    double best = kInf;
    for (double h : h_sequence) {
      Vec zh = z + (h / un) * u;  // normalized so |h| is the l1 step
      double q = extend_metric(D, z, zh) / h;
      best = std::min(best, q);
    }
    out.values.push_back(best);
  }
  std::vector<Vec> dirs_normalized;
  for (const Vec& u : directions) dirs_normalized.push_back((1.0 / l1_norm(u)) * u);
  out.seminorm = Seminorm::sampled(dirs_normalized, out.values);
  return out;
}

std::vector<double> default_h_sequence(double window_scale) {
  std::vector<double> hs;
  for (int e = 1; e <= 6; ++e) hs.push_back(window_scale / (1 << e));
  return hs;
}

// ---------------------------------------------------------------------------
// GradientField

GradientField GradientField::constant(const ConvexWindow& window, double a, double b,
                                      Seminorm g) {
  return tiled(window, a, b, 1, {std::move(g)});
}

GradientField GradientField::tiled(const ConvexWindow& window, double a, double b,
                                   int tiles_per_axis, std::vector<Seminorm> tiles) {
  const int d = window.dim();
  long expected = 1;
  for (int i = 0; i < d; ++i) expected *= tiles_per_axis;
  if (static_cast<long>(tiles.size()) != expected)
    throw invalid_input("GradientField::tiled: wrong tile count");
  GradientField f;
  f.window_ = window;
  f.t_ = tiles_per_axis;
  f.a_ = a;
  f.b_ = b;
  f.tiles_ = std::move(tiles);
  Vec lo, hi;
  window.bounds(lo, hi);
  f.origin_ = lo;
  f.cell_step_.assign(d, 0.0);
  for (int i = 0; i < d; ++i) f.cell_step_[i] = (hi[i] - lo[i]) / tiles_per_axis;
  return f;
}

IVec GradientField::cell_of(const Vec& z) const {
  const int d = window_.dim();
  IVec c(d);
  for (int i = 0; i < d; ++i) {
    long v = static_cast<long>(std::floor((z[i] - origin_[i]) / cell_step_[i]));
    c[i] = std::clamp(v, 0L, static_cast<long>(t_ - 1));
  }
  return c;
}

Vec GradientField::cell_midpoint(const IVec& cell) const {
  const int d = window_.dim();
  Vec m(d);
  for (int i = 0; i < d; ++i)
    m[i] = origin_[i] + (cell[i] + 0.5) * cell_step_[i];
  return m;
}

const Seminorm& GradientField::at(const Vec& z) const {
  IVec c = cell_of(z);
  long id = 0;
  for (int i = 0; i < window_.dim(); ++i) id = id * t_ + c[i];
  return tiles_[id];
}

Seminorm& GradientField::tile(const IVec& cell) {
  long id = 0;
  for (int i = 0; i < window_.dim(); ++i) id = id * t_ + cell[i];
  return tiles_[id];
}

bool GradientField::norm_valued(double tol) const {
  const auto dirs = l1_sphere_directions(window_.dim(), window_.dim() == 2 ? 64 : 146);
  for (const Seminorm& g : tiles_) {
    for (const Vec& u : dirs) {
      double v = g(u);
      if (v < a_ - tol || v > b_ + tol) return false;
    }
    if (g.min_on_sphere() <= tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// constructions

namespace {

// stencil of index moves with linf radius <= 2, one representative per
// opposite pair
std::vector<IVec> prescribe_stencil(int d) {
  std::vector<IVec> moves;
  IVec v(d, -2);
  while (true) {
    bool zero = std::all_of(v.begin(), v.end(), [](long t) { return t == 0; });
    if (!zero) {
      // keep one of {v, -v}: first nonzero coordinate positive
      int first = 0;
      while (v[first] == 0) ++first;
      if (v[first] > 0) moves.push_back(v);
    }
    int ax = d - 1;
    while (ax >= 0) {
      if (++v[ax] <= 2) break;
      v[ax] = -2;
      --ax;
    }
    if (ax < 0) break;
  }
  return moves;
}

// all-pairs shortest path over grid nodes with a caller-supplied arc cost;
// cost < 0 marks a forbidden arc
GridMetric graph_metric(const ConvexWindow& window, int resolution, double a, double b,
                        const std::function<double(const GridMetric&, int, int)>& arc_cost,
                        const std::vector<IVec>& moves) {
  GridMetric D = GridMetric::sample(window, resolution, a, b,
                                    [](const Vec&, const Vec&) { return 0.0; });
  const int n = D.size();
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (const IVec& mv : moves) {
      IVec to = D.multi_index(i);
      for (std::size_t t = 0; t < to.size(); ++t) to[t] += mv[t];
      int j = D.find(to);
      if (j < 0) continue;
      double w = arc_cost(D, i, j);
      if (w < 0) continue;
      adj[i].push_back({j, w});
      adj[j].push_back({i, w});
    }
  }
  for (int s = 0; s < n; ++s) {
    auto dist = dijkstra(n, adj, s);
    for (int t = 0; t < n; ++t) {
      if (!std::isfinite(dist[t]))
        throw internal_invariant_violation("graph_metric: disconnected grid");
      if (t > s) D.set_value(s, t, dist[t]);
    }
  }
  return D;
}

}  // namespace

GridMetric prescribe_metric(const GradientField& field, int fine_resolution) {
  if (fine_resolution < field.tiles_per_axis())
    throw invalid_input("prescribe_metric: resolution below tiling resolution");
  if (!field.norm_valued())
    throw invalid_input("prescribe_metric: field must be norm-valued");
  const auto moves = prescribe_stencil(field.window().dim());
  return graph_metric(
      field.window(), fine_resolution, field.bound_a(), field.bound_b(),
      [&](const GridMetric& D, int i, int j) {
        Vec mid = 0.5 * (D.point(i) + D.point(j));
        return field.at(mid)(D.point(j) - D.point(i));
      },
      moves);
}

GridMetric scale_metric(const GridMetric& D, double lambda) {
  if (!(lambda > 0)) throw invalid_input("scale_metric: lambda must be > 0");
  GridMetric out = D;
  out.window_ = D.window_.scaled(lambda);
  for (auto& p : out.pts_) p = lambda * p;
  out.origin_ = lambda * out.origin_;
  for (auto& s : out.step_) s *= lambda;
  for (auto& v : out.vals_) v *= lambda;
  return out;
}

GridMetric translate_metric(const GridMetric& D, const Vec& z0) {
  GridMetric out = D;
  out.window_ = D.window_.translated(z0);
  for (auto& p : out.pts_) p = p + z0;
  out.origin_ = out.origin_ + z0;
  return out;
}

GridMetric restrict_metric(const GridMetric& D, const ConvexWindow& Y,
                           RestrictArcs arcs) {
  // surviving nodes
  std::vector<int> keep;
  for (int i = 0; i < D.size(); ++i)
    if (Y.contains(D.point(i), 1e-12)) keep.push_back(i);
  if (keep.empty())
    throw invalid_input("restrict_metric: Y contains no grid point");
  const int n = static_cast<int>(keep.size());

  // arc costs: D-length of the segment, summed over collinear grid points
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (int ii = 0; ii < n; ++ii)
    for (int jj = ii + 1; jj < n; ++jj) {
      int i = keep[ii], j = keep[jj];
      IVec delta(D.window().dim());
      long l1 = 0;
      for (int t = 0; t < D.window().dim(); ++t) {
        delta[t] = D.multi_index(j)[t] - D.multi_index(i)[t];
        l1 += std::labs(delta[t]);
      }
      if (arcs == RestrictArcs::Lattice && l1 != 1) continue;
      long g = ivec_gcd(delta);
      double cost = 0;
      bool ok = true;
      int prev = i;
      for (long s = 1; s <= g && ok; ++s) {
        IVec mid = D.multi_index(i);
        for (int t = 0; t < D.window().dim(); ++t) mid[t] += delta[t] / g * s;
        int node = D.find(mid);
        if (node < 0 || (s < g && !Y.contains(D.point(node), 1e-12))) {
          ok = false;
          break;
        }
        cost += D.value(prev, node);
        prev = node;
      }
      if (ok) {
        adj[ii].push_back({jj, cost});
        adj[jj].push_back({ii, cost});
      }
    }

  GridMetric out = GridMetricBuilder::subset(D, Y, keep);
  for (int s = 0; s < n; ++s) {
    auto dist = dijkstra(n, adj, s);
    for (int t = s + 1; t < n; ++t) {
      if (!std::isfinite(dist[t]))
        throw internal_invariant_violation("restrict_metric: disconnected");
      out.set_value(s, t, dist[t]);
    }
  }
  return out;
}

GridMetric stitch_metrics(const std::vector<std::pair<ConvexWindow, GridMetric>>& pieces,
                          const ConvexWindow& ambient, int fine_resolution,
                          double a, double b) {
  const auto moves = prescribe_stencil(ambient.dim());
  return graph_metric(
      ambient, fine_resolution, a, b,
      [&](const GridMetric& D, int i, int j) {
        const Vec& p = D.point(i);
        const Vec& q = D.point(j);
        Vec mid = 0.5 * (p + q);
        double best = kInf;
        for (const auto& [win, piece] : pieces)
          if (win.contains(mid, 1e-12))
            best = std::min(best, extend_metric(piece, p, q));
        if (!std::isfinite(best)) best = b * l1_dist(p, q);  // uncovered
        return best;
      },
      moves);
}

// ---------------------------------------------------------------------------
// corridor lower bound

CorridorCheck corridor_lower_bound(const GridMetric& D_target,
                                   const GridMetric& D_prime,
                                   const std::vector<ConvexWindow>& tiles,
                                   double delta1, double delta2, double eps) {
  CorridorCheck out;
  const double diam = D_prime.window().l1_diameter();
  if (!(delta1 > 0) || delta1 > diam + 1e-12)
    throw invalid_input("corridor: need 0 < delta1 <= diam(X)");
  if (!(eps > 0) || eps >= D_prime.bound_b() / 2)
    throw invalid_input("corridor: need 0 < eps < b/2");
  out.bound_offset = 3.0 * diam * (eps + delta2 / delta1);
  std::ostringstream detail;

  // (1) pairwise tile separation >= delta1 (boxes: exact l1 gap)
  out.separation_ok = true;
  for (std::size_t i = 0; i < tiles.size() && out.separation_ok; ++i)
    for (std::size_t j = i + 1; j < tiles.size(); ++j) {
      double gap = 0;
      if (tiles[i].is_box() && tiles[j].is_box()) {
        for (int t = 0; t < tiles[i].dim(); ++t) {
          double lo1 = tiles[i].box_lo()[t], hi1 = tiles[i].box_hi()[t];
          double lo2 = tiles[j].box_lo()[t], hi2 = tiles[j].box_hi()[t];
          gap += std::max({0.0, lo2 - hi1, lo1 - hi2});
        }
      } else {
        gap = kInf;
        for (const Vec& u : tiles[i].vertices())
          for (const Vec& v : tiles[j].vertices())
            gap = std::min(gap, l1_dist(u, v));
      }
      if (gap < delta1 - 1e-12) {
        out.separation_ok = false;
        detail << "tiles " << i << "," << j << " at distance " << gap
               << " < delta1; ";
        break;
      }
    }

  // (2) per-tile control: restrict(D', X_k) >= D - delta2 on tile samples;
  // lattice arcs keep the restriction sound for box passage times
  out.control_ok = true;
  const double tol = 1e-9 * std::max(1.0, D_prime.bound_b());
  for (std::size_t t = 0; t < tiles.size() && out.control_ok; ++t) {
    GridMetric R = restrict_metric(D_prime, tiles[t], RestrictArcs::Lattice);
    for (int i = 0; i < R.size() && out.control_ok; ++i)
      for (int j = i + 1; j < R.size(); ++j) {
        double target = D_target.value_at(R.point(i), R.point(j));
        if (R.value(i, j) < target - delta2 - tol) {
          out.control_ok = false;
          detail << "control fails on tile " << t << " deficit "
                 << target - delta2 - R.value(i, j) << "; ";
          break;
        }
      }
  }

  // (3) corridor intensity, checked on adjacent off-tile sample pairs whose
  // connecting segment avoids every tile (grid proxy of the curve statement)
  out.intensity_ok = true;
  auto off_tiles = [&](const Vec& x) {
    for (const auto& t : tiles)
      if (t.contains(x, 1e-12)) return false;  // closed tiles
    return true;
  };
  for (int i = 0; i < D_prime.size() && out.intensity_ok; ++i) {
    if (!off_tiles(D_prime.point(i))) continue;
    for (int j = i + 1; j < D_prime.size(); ++j) {
      if (!off_tiles(D_prime.point(j))) continue;
      long steps = 0;
      for (int t = 0; t < D_prime.window().dim(); ++t)
        steps += std::labs(D_prime.multi_index(j)[t] - D_prime.multi_index(i)[t]);
      if (steps != 1) continue;  // adjacent pairs only
      Vec mid = 0.5 * (D_prime.point(i) + D_prime.point(j));
      if (!off_tiles(mid)) continue;
      double len = l1_dist(D_prime.point(i), D_prime.point(j));
      if (D_prime.value(i, j) < (D_prime.bound_b() - eps) * len - tol) {
        out.intensity_ok = false;
        detail << "intensity fails at sample pair (" << i << "," << j << "); ";
        break;
      }
    }
  }

  out.detail = detail.str();
  return out;
}

}  // namespace fpp
