#include "fpp/path_tools.hpp"

#include <algorithm>
#include <cmath>

#include "fpp/rng.hpp"

namespace fpp {

Vec PiecewiseLinearPath::eval(double t) const {
  if (times.size() != points.size() || times.empty())
    throw invalid_input("PiecewiseLinearPath: malformed");
  if (t <= times.front()) return points.front();
  if (t >= times.back()) return points.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t i = it - times.begin();
  double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
  return points[i - 1] + w * (points[i] - points[i - 1]);
}

double PiecewiseLinearPath::l1_arclength(double t1, double t2) const {
  t1 = std::max(t1, times.front());
  t2 = std::min(t2, times.back());
  if (t2 <= t1) return 0;
  double s = 0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    double lo = std::max(t1, times[i]), hi = std::min(t2, times[i + 1]);
    if (hi <= lo) continue;
    double frac = (hi - lo) / (times[i + 1] - times[i]);
    s += frac * l1_dist(points[i + 1], points[i]);
  }
  return s;
}

long DiscretizedPath::j_of(double t) const {
  // right-continuous: a jump at time t counts at t
  return std::upper_bound(jump_times.begin(), jump_times.end(), t) -
         jump_times.begin();
}

namespace {

struct Crossing {
  double t;
  int axis;
  long value;  // the integer reached
};

// strict integer crossings of the scalar line segment v0 -> v1 over [t0, t1]
void collect_crossings(double t0, double t1, double v0, double v1, int axis,
                       std::vector<Crossing>& out) {
  if (v0 == v1) return;
  long lo = static_cast<long>(std::floor(std::min(v0, v1))) + 1;
  long hi = static_cast<long>(std::ceil(std::max(v0, v1))) - 1;
  for (long m = lo; m <= hi; ++m) {
    double w = (m - v0) / (v1 - v0);
    if (w <= 0 || w >= 1) {
      // endpoint touches are handled by the caller's retry policy
      if (w == 0 || w == 1) continue;
      continue;
    }
    out.push_back({t0 + w * (t1 - t0), axis, m});
  }
}

}  // namespace

DiscretizedPath discretize_path(const PiecewiseLinearPath& sigma, double lambda,
                                std::uint64_t shift_seed) {
  if (!(lambda > 0)) throw invalid_input("discretize_path: lambda must be > 0");
  const int d = static_cast<int>(sigma.points.front().size());
  CounterRng rng(shift_seed, 0x7061746873ULL);

  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt > 512)
      throw internal_invariant_violation("discretize_path: shift rejection stuck");
    // draw z uniformly in the open unit l1 ball
    Vec z(d);
    double n1 = 0;
    for (int i = 0; i < d; ++i) {
      z[i] = rng.uniform(attempt * 16 + i, -1.0, 1.0);
      n1 += std::abs(z[i]);
    }
    if (n1 >= 1.0) continue;

    // collect all strict crossings of lambda sigma_i + z_i
    std::vector<Crossing> crossings;
    bool degenerate = false;
    for (std::size_t seg = 0; seg + 1 < sigma.times.size() && !degenerate; ++seg) {
      for (int i = 0; i < d; ++i) {
        double v0 = lambda * sigma.points[seg][i] + z[i];
        double v1 = lambda * sigma.points[seg + 1][i] + z[i];
        // a value sitting exactly on an integer makes the jump count
        // ambiguous; the translation makes this a null event, so redraw
        if (v0 == std::floor(v0) || v1 == std::floor(v1)) {
          degenerate = true;
          break;
        }
        collect_crossings(sigma.times[seg], sigma.times[seg + 1], v0, v1, i,
                          crossings);
      }
    }
    if (degenerate) continue;

    std::sort(crossings.begin(), crossings.end(),
              [](const Crossing& a, const Crossing& b) { return a.t < b.t; });
    bool simultaneous = false;
    for (std::size_t i = 0; i + 1 < crossings.size(); ++i)
      if (crossings[i + 1].t - crossings[i].t < 1e-12 &&
          crossings[i + 1].axis != crossings[i].axis)
        simultaneous = true;
    if (simultaneous) continue;

    DiscretizedPath out;
    out.lambda = lambda;
    out.shift = z;
    IVec cur(d);
    for (int i = 0; i < d; ++i)
      cur[i] = static_cast<long>(
          std::floor(lambda * sigma.points.front()[i] + z[i]));
    out.alpha.push_back(cur);
    for (const Crossing& c : crossings) {
      if (cur[c.axis] == c.value) continue;  // re-visit without a move
      if (std::labs(cur[c.axis] - c.value) != 1)
        throw internal_invariant_violation("discretize_path: non-unit jump");
      cur[c.axis] = c.value;
      out.alpha.push_back(cur);
      out.jump_times.push_back(c.t);
    }
    return out;
  }
}

HighwayResult insert_highway(const WeightConfiguration& cfg,
                             const DiscretizedPath& path, double level) {
  const LatticeBox& box = cfg.box();
  if (level < cfg.law().support_min() - 1e-12 ||
      level > cfg.law().support_max() + 1e-12)
    throw invalid_input("insert_highway: level outside [a, b]");
  for (const IVec& p : path.alpha)
    if (!box.contains(p)) throw invalid_input("insert_highway: path exits box");

  HighwayResult out{cfg, 0, 0};
  for (std::size_t i = 0; i + 1 < path.alpha.size(); ++i) {
    const IVec& p = path.alpha[i];
    const IVec& q = path.alpha[i + 1];
    int axis = -1;
    for (int t = 0; t < box.dim(); ++t)
      if (p[t] != q[t]) axis = t;
    const IVec& base = p[axis] < q[axis] ? p : q;
    long slot = box.edge_slot(base, axis);
    ++out.edge_count;
    if (level < out.config.weight(slot)) {
      out.config.set_weight(slot, level);
      ++out.modified_count;
    }
  }
  return out;
}

}  // namespace fpp
