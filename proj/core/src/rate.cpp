#include "fpp/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace fpp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CostModel kesten_bound_model(const BoundedLaw& law, int dim) {
  CostModel m;
  m.name = "kesten-bound";
  m.monotone = true;
  m.reflection_invariant = true;
  m.cost = [law, dim](const Seminorm& g) {
    double tail = law.tail_mass(g.sup_on_sphere());
    if (tail <= 0) return kInf;
    return -dim * std::log(tail);
  };
  return m;
}

CostModel empirical_model(std::vector<std::pair<double, double>> table, int dim) {
  if (table.empty()) throw invalid_input("empirical_model: empty table");
  std::sort(table.begin(), table.end());
  // isotonic regularization: running maximum
  for (std::size_t i = 1; i < table.size(); ++i)
    table[i].second = std::max(table[i].second, table[i - 1].second);
  CostModel m;
  m.name = "empirical";
  m.monotone = true;
  m.reflection_invariant = true;
  m.cost = [table, dim](const Seminorm& g) {
    (void)dim;
    double z = g.sup_on_sphere();
    if (z <= table.front().first) return table.front().second;
    if (z >= table.back().first) return table.back().second;
    for (std::size_t i = 1; i < table.size(); ++i)
      if (z <= table[i].first) {
        double w = (z - table[i - 1].first) /
                   (table[i].first - table[i - 1].first);
        return (1 - w) * table[i - 1].second + w * table[i].second;
      }
    return table.back().second;
  };
  return m;
}

CostModel quadratic_toy_model(double pivot, int dim) {
  CostModel m;
  m.name = "quadratic-toy";
  m.monotone = true;
  m.reflection_invariant = true;
  (void)dim;
  m.cost = [pivot](const Seminorm& g) {
    double t = g.sup_on_sphere() - pivot;
    return t > 0 ? t * t : 0.0;
  };
  return m;
}

Seminorm crossing_seminorm(const Vec& zeta) {
  for (double z : zeta)
    if (z < 0) throw invalid_input("crossing_seminorm: negative entry");
  return Seminorm::weighted_linf(zeta);
}

// ---------------------------------------------------------------------------
// integral rate

namespace {

IntegralResult quadrature(const ConvexWindow& window, int k,
                          const std::function<double(const Vec&)>& cost_at) {
  auto tiles = window.tiles(k);
  IntegralResult out;
  const double cell = std::pow(1.0 / k, window.dim());
  std::vector<IVec> inner_sorted = tiles.inner;
  std::sort(inner_sorted.begin(), inner_sorted.end());
  for (const IVec& v : tiles.outer) {
    Vec mid(window.dim());
    for (int i = 0; i < window.dim(); ++i) mid[i] = (v[i] + 0.5) / k;
    double c = cost_at(mid);
    bool inner = std::binary_search(inner_sorted.begin(), inner_sorted.end(), v);
    if (std::isinf(c)) {
      out.is_infinite = true;
      out.infinite_tiles.push_back(v);
      continue;
    }
    out.outer_sum += c * cell;
    if (inner) out.inner_sum += c * cell;
  }
  out.value = out.is_infinite ? kInf : out.outer_sum;
  return out;
}

}  // namespace

IntegralResult integral_rate(const GradientField& field, const CostModel& model,
                             int tiling_k) {
  return quadrature(field.window(), tiling_k,
                    [&](const Vec& mid) { return model.cost(field.at(mid)); });
}

IntegralResult integral_rate(const GridMetric& D, const CostModel& model,
                             int tiling_k, const std::vector<Vec>& directions,
                             const std::vector<double>& h_sequence) {
  return quadrature(D.window(), tiling_k, [&](const Vec& mid) {
    auto grad = estimate_gradient(D, mid, directions, h_sequence);
    return model.cost(grad.seminorm);
  });
}

double crossing_rate(const Vec& zeta, const CostModel& model, double a) {
  Seminorm g = Seminorm::max_of(crossing_seminorm(zeta),
                                Seminorm::scaled_l1(static_cast<int>(zeta.size()), a));
  return model.cost(g);
}

// ---------------------------------------------------------------------------
// point-point variational search

namespace {

// single-pair prescribed distance, cheaper than the all-pairs metric
double prescribed_distance(const GradientField& field, int m, const Vec& from,
                           const Vec& to) {
  GridMetric probe = GridMetric::sample(field.window(), m, field.bound_a(),
                                        field.bound_b(),
                                        [](const Vec&, const Vec&) { return 0.0; });
  const int n = probe.size();
  const int d = field.window().dim();
  // stencil moves with linf radius 2
  std::vector<IVec> moves;
  IVec v(d, -2);
  while (true) {
    bool zero = std::all_of(v.begin(), v.end(), [](long t) { return t == 0; });
    if (!zero) moves.push_back(v);
    int ax = d - 1;
    while (ax >= 0) {
      if (++v[ax] <= 2) break;
      v[ax] = -2;
      --ax;
    }
    if (ax < 0) break;
  }
  int src = probe.find(from), dst = probe.find(to);
  if (src < 0 || dst < 0)
    throw invalid_input("point_point_rate: endpoint not on the search grid");
  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[src] = 0;
  heap.push({0.0, src});
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    if (u == dst) break;
    for (const IVec& mv : moves) {
      IVec to_idx = probe.multi_index(u);
      for (int t = 0; t < d; ++t) to_idx[t] += mv[t];
      int w = probe.find(to_idx);
      if (w < 0) continue;
      Vec mid = 0.5 * (probe.point(u) + probe.point(w));
      double alt = du + field.at(mid)(probe.point(w) - probe.point(u));
      if (alt < dist[w]) {
        dist[w] = alt;
        heap.push({alt, w});
      }
    }
  }
  return dist[dst];
}

}  // namespace

PointPointResult point_point_rate(const Vec& x, double zeta, const CostModel& model,
                                  double a, double b, int tile_k, int grid_m,
                                  int budget) {
  const int d = static_cast<int>(x.size());
  const double xn = l1_norm(x);
  if (zeta < a * xn - 1e-12 || zeta > b * xn + 1e-12)
    throw invalid_input("point_point_rate: zeta outside [a|x|, b|x|]");

  // window [-C, C]^d with C = b|x|/a, rounded up so 0 and x sit on the grid
  const double C = std::ceil(b * xn / a);
  ConvexWindow window = ConvexWindow::box(Vec(d, -C), Vec(d, C));
  if (grid_m % 2 != 0) ++grid_m;

  Vec origin(d, 0.0);
  const double cell_vol = std::pow(2.0 * C / tile_k, d);

  long tiles_total = 1;
  for (int i = 0; i < d; ++i) tiles_total *= tile_k;

  auto make_field = [&](const std::vector<double>& scales) {
    std::vector<Seminorm> tiles;
    tiles.reserve(scales.size());
    for (double s : scales) tiles.push_back(Seminorm::scaled_l1(d, s));
    return GradientField::tiled(window, a, b, tile_k, std::move(tiles));
  };
  auto total_cost = [&](const std::vector<double>& scales) {
    double c = 0;
    for (double s : scales) {
      double v = model.cost(Seminorm::scaled_l1(d, s));
      if (std::isinf(v)) return kInf;
      c += v * cell_vol;
    }
    return c;
  };

  PointPointResult out;
  {
    Seminorm trivial = Seminorm::max_of(
        crossing_seminorm(Vec(d, zeta / xn)), Seminorm::scaled_l1(d, a));
    double c = model.cost(trivial);
    out.trivial_upper_bound = std::isinf(c) ? kInf : c * std::pow(2 * C, d);
  }

  // feasible starts: constant b, and the cheapest feasible constant
  std::vector<std::vector<double>> starts;
  starts.push_back(std::vector<double>(tiles_total, b));
  double s0 = std::min(b, std::max(a, zeta / xn));
  starts.push_back(std::vector<double>(tiles_total, s0));

  double best_cost = kInf;
  std::vector<double> best_scales;
  double best_margin = 0;

  for (auto scales : starts) {
    double dist = prescribed_distance(make_field(scales), grid_m, origin, x);
    ++out.evaluations;
    if (dist < zeta - 1e-9) continue;  // infeasible start
    double cost = total_cost(scales);

    double step = (b - a) / 2;
    while (step > 1e-3 * (b - a) && out.evaluations < budget) {
      bool improved = false;
      for (long t = 0; t < tiles_total && out.evaluations < budget; ++t) {
        double saved = scales[t];
        double lowered = std::max(a, saved - step);
        if (lowered == saved) continue;
        scales[t] = lowered;
        double cand_cost = total_cost(scales);
        if (cand_cost >= cost) {
          scales[t] = saved;
          continue;
        }
        double cand_dist = prescribed_distance(make_field(scales), grid_m, origin, x);
        ++out.evaluations;
        if (cand_dist >= zeta - 1e-9) {
          cost = cand_cost;
          dist = cand_dist;
          improved = true;
        } else {
          scales[t] = saved;
        }
      }
      if (!improved) step /= 2;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_scales = scales;
      best_margin = dist - zeta;
    }
  }

  if (best_scales.empty())
    throw internal_invariant_violation("point_point_rate: no feasible start");
  out.value = best_cost;
  out.witness = make_field(best_scales);
  out.constraint_margin = best_margin;
  return out;
}

// ---------------------------------------------------------------------------
// symmetrization

GridMetric symmetrize(const GridMetric& D) {
  const ConvexWindow& win = D.window();
  const int d = win.dim();
  Vec lo, hi;
  win.bounds(lo, hi);
  for (int i = 0; i < d; ++i)
    if (std::abs(lo[i]) > 1e-12 || std::abs(hi[i] - 1.0) > 1e-12)
      throw invalid_input("symmetrize: window must be [0,1]^d");
  const int k = D.resolution();
  if (k % 2 != 0) throw invalid_input("symmetrize: grid must be even");

  // half-scale reflected lookup: maps a point of sub-box A onto [0,1]^d
  auto reflected_value = [&](const IVec& ia, const IVec& ib, const IVec& sub) {
    IVec ra(d), rb(d);
    for (int i = 0; i < d; ++i) {
      // h_A then doubling, expressed on grid indices
      long va = ia[i], vb = ib[i];
      if (sub[i] == 1) {
        va = k - va;
        vb = k - vb;
      }
      ra[i] = 2 * va;
      rb[i] = 2 * vb;
    }
    int i1 = D.find(ra), i2 = D.find(rb);
    if (i1 < 0 || i2 < 0)
      throw internal_invariant_violation("symmetrize: reflected point missing");
    return 0.5 * D.value(i1, i2);
  };

  // shortest path over the grid; arcs stay within one closed sub-box
  GridMetric out = GridMetric::sample(win, k, D.bound_a(), D.bound_b(),
                                      [](const Vec&, const Vec&) { return 0.0; });
  const int n = out.size();
  std::vector<IVec> moves;
  IVec v(d, -2);
  while (true) {
    bool zero = std::all_of(v.begin(), v.end(), [](long t) { return t == 0; });
    if (!zero) {
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
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (const IVec& mv : moves) {
      IVec jdx = out.multi_index(i);
      for (int t = 0; t < d; ++t) jdx[t] += mv[t];
      int j = out.find(jdx);
      if (j < 0) continue;
      // both endpoints must share a closed sub-box
      const IVec& ia = out.multi_index(i);
      bool shared = true;
      IVec sub(d);
      for (int t = 0; t < d && shared; ++t) {
        long lo_i = std::min(ia[t], jdx[t]), hi_i = std::max(ia[t], jdx[t]);
        if (hi_i <= k / 2)
          sub[t] = 0;
        else if (lo_i >= k / 2)
          sub[t] = 1;
        else
          shared = false;
      }
      if (!shared) continue;
      double w = reflected_value(ia, jdx, sub);
      adj[i].push_back({j, w});
      adj[j].push_back({i, w});
    }
  }
  for (int s = 0; s < n; ++s) {
    std::vector<double> dist(n, kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[s] = 0;
    heap.push({0.0, s});
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (du > dist[u]) continue;
      for (auto [w, c] : adj[u]) {
        double alt = du + c;
        if (alt < dist[w]) {
          dist[w] = alt;
          heap.push({alt, w});
        }
      }
    }
    for (int t = s + 1; t < n; ++t) {
      if (!std::isfinite(dist[t]))
        throw internal_invariant_violation("symmetrize: disconnected grid");
      out.set_value(s, t, dist[t]);
    }
  }
  return out;
}

std::vector<Vec> ball_map(const GridMetric& D, double threshold) {
  int origin = D.find(Vec(D.window().dim(), 0.0));
  if (origin < 0) throw invalid_input("ball_map: 0 must be a grid sample");
  std::vector<Vec> out;
  for (int i = 0; i < D.size(); ++i)
    if (D.value(origin, i) <= threshold) out.push_back(D.point(i));
  return out;
}

}  // namespace fpp
