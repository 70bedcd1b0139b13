#include "fpp/ld.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace fpp {

namespace {

constexpr double kZ95 = 1.959963984540054;

// fixed chunking so reductions are independent of the thread count
struct ChunkStat {
  long long hits = 0;
  double sum_w = 0, sum_w2 = 0;
};

template <typename Work>
std::vector<ChunkStat> run_chunks(long long trials, int threads, Work work) {
  const long long chunk = std::max<long long>(1, trials / 256);
  const long long nchunks = (trials + chunk - 1) / chunk;
  std::vector<ChunkStat> stats(nchunks);
  std::atomic<long long> next{0};
  auto runner = [&] {
    while (true) {
      long long c = next.fetch_add(1);
      if (c >= nchunks) break;
      long long lo = c * chunk, hi = std::min(trials, lo + chunk);
      ChunkStat st;
      for (long long t = lo; t < hi; ++t) work(t, st);
      stats[c] = st;
    }
  };
  if (threads <= 1) {
    runner();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(runner);
    for (auto& th : pool) th.join();
  }
  return stats;
}

double pow_int(double x, int e) {
  double r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

double wilson_lower(long long hits, long long trials) {
  if (trials == 0) return 0;
  const double z = kZ95, n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double den = 1 + z * z / n;
  const double center = p + z * z / (2 * n);
  const double rad = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  return std::max(0.0, (center - rad) / den);
}

double wilson_upper(long long hits, long long trials) {
  if (trials == 0) return 1;
  const double z = kZ95, n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double den = 1 + z * z / n;
  const double center = p + z * z / (2 * n);
  const double rad = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  return std::min(1.0, (center + rad) / den);
}

// ---------------------------------------------------------------------------
// events

LdEvent LdEvent::one_sided_lower(ConvexWindow window, int n, Seminorm g, double eps,
                                 int k) {
  LdEvent e;
  e.window = std::move(window);
  e.n = n;
  e.k = k > 0 ? k : n;
  e.target_norm = std::move(g);
  e.eps = eps;
  e.one_sided = true;
  return e;
}

LdEvent LdEvent::two_sided(ConvexWindow window, int n, Seminorm g, double eps,
                           int k) {
  LdEvent e = one_sided_lower(std::move(window), n, std::move(g), eps, k);
  e.one_sided = false;
  return e;
}

LatticeBox LdEvent::required_box() const {
  Vec lo, hi;
  window.bounds(lo, hi);
  IVec ilo(window.dim()), ihi(window.dim());
  for (int i = 0; i < window.dim(); ++i) {
    ilo[i] = static_cast<long>(std::floor(lo[i] * n + 1e-9));
    ihi[i] = static_cast<long>(std::ceil(hi[i] * n - 1e-9));
  }
  return LatticeBox(ilo, ihi);
}

double LdEvent::target_at(const Vec& x, const Vec& y) const {
  if (target_norm) return (*target_norm)(x - y);
  if (target_metric) return target_metric->value_at(x, y);
  throw invalid_input("LdEvent: no target");
}

bool event_indicator(const WeightConfiguration& cfg, const LdEvent& event) {
  if (event.eps <= 0) throw invalid_input("LdEvent: eps must be > 0");
  GridMetric R = rescaled_metric(cfg, event.window, event.n, event.k);
  for (int i = 0; i < R.size(); ++i)
    for (int j = i + 1; j < R.size(); ++j) {
      double t = event.target_at(R.point(i), R.point(j));
      double v = R.value(i, j);
      if (event.one_sided) {
        if (v < t - event.eps) return false;
      } else {
        if (std::abs(v - t) > event.eps) return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------------------
// exact enumeration

RateEstimate exact_probability(const LatticeBox& box, const BoundedLaw& law,
                               const ConfigIndicator& indicator, int n, int dim,
                               const std::vector<double>& slot_lower_bounds) {
  if (!law.is_discrete())
    throw invalid_input("exact_probability: law must be discrete");
  const auto& atoms = law.atoms();
  const long edges = box.edge_count();
  const double bits = edges * std::log2(static_cast<double>(atoms.size()));
  if (bits > 24.0 + 1e-9) {
    std::ostringstream os;
    os << "exact_probability: enumeration budget exceeded (needs " << bits
       << " bits, budget 24)";
    throw budget_exceeded(os.str());
  }

  std::vector<long> slots;
  box.for_each_edge([&](const IVec&, int, long slot) { slots.push_back(slot); });

  WeightConfiguration cfg(box, law, 0, 0);
  std::vector<std::size_t> digit(slots.size(), 0);
  // per-edge necessary bound implied by the event; a digit below its bound
  // makes the whole configuration a miss without running the indicator
  std::vector<char> bad(slots.size(), 0);
  long bad_count = 0;
  auto assign = [&](std::size_t i, std::size_t dig) {
    digit[i] = dig;
    cfg.set_weight(slots[i], atoms[dig].t);
    char was = bad[i];
    bad[i] = !slot_lower_bounds.empty() &&
             atoms[dig].t < slot_lower_bounds[slots[i]] - 1e-12;
    bad_count += bad[i] - was;
  };
  for (std::size_t i = 0; i < slots.size(); ++i) assign(i, 0);

  double total = 0;
  while (true) {
    if (bad_count == 0) {
      double mass = 1;
      for (std::size_t i = 0; i < slots.size(); ++i) mass *= atoms[digit[i]].mass;
      if (mass > 0 && indicator(cfg)) total += mass;
    }
    // odometer
    std::size_t i = 0;
    while (i < slots.size()) {
      if (digit[i] + 1 < atoms.size()) {
        assign(i, digit[i] + 1);
        break;
      }
      assign(i, 0);
      ++i;
    }
    if (i == slots.size()) break;
  }

  RateEstimate out;
  out.n = n;
  out.dim = dim;
  out.exact = true;
  out.trials = 1;
  out.hits = total > 0 ? 1 : 0;
  out.p_hat = total;
  out.ci_lo = total;
  out.ci_hi = total;
  out.rate = total > 0 ? -std::log(total) / pow_int(n, dim)
                       : std::numeric_limits<double>::infinity();
  out.method = "exact";
  return out;
}

RateEstimate exact_probability(const BoundedLaw& law, const LdEvent& event) {
  LatticeBox box = event.required_box();
  // necessary per-edge bound when adjacent grid samples are lattice
  // neighbours (k = n): the one-edge path upper-bounds D on such pairs
  std::vector<double> bounds;
  if (event.one_sided && event.target_norm && event.k == event.n) {
    const int d = event.window.dim();
    bounds.assign(box.slot_count(), 0.0);
    Vec unit(d, 0.0);
    for (int axis = 0; axis < d; ++axis) {
      unit.assign(d, 0.0);
      unit[axis] = 1.0;
      double req = (*event.target_norm)(unit) - event.n * event.eps;
      box.for_each_edge([&](const IVec&, int ax, long slot) {
        if (ax == axis) bounds[slot] = req;
      });
    }
  }
  RateEstimate out = exact_probability(
      box, law, [&](const WeightConfiguration& c) { return event_indicator(c, event); },
      event.n, event.window.dim(), bounds);
  out.eps = event.eps;
  out.eps_slack = 2.0 * law.support_max() / event.k;
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo

RateEstimate estimate_probability(const LatticeBox& box, const BoundedLaw& law,
                                  const ConfigIndicator& indicator, int n, int dim,
                                  long long trials, std::optional<double> tilt_theta,
                                  std::uint64_t seed, int threads) {
  if (trials < 1) throw invalid_input("estimate_probability: trials >= 1");
  RateEstimate out;
  out.n = n;
  out.dim = dim;
  out.trials = trials;
  const double nd = pow_int(n, dim);

  if (!tilt_theta || *tilt_theta == 0.0) {
    auto stats = run_chunks(trials, threads, [&](long long t, ChunkStat& st) {
      WeightConfiguration cfg =
          sample_configuration(box, law, seed, static_cast<std::uint64_t>(t));
      if (indicator(cfg)) ++st.hits;
    });
    for (const auto& st : stats) out.hits += st.hits;
    out.p_hat = static_cast<double>(out.hits) / trials;
    out.ci_lo = wilson_lower(out.hits, trials);
    out.ci_hi = wilson_upper(out.hits, trials);
    out.method = "crude-mc";
  } else {
    const TiltedLaw tl = tilt(law, *tilt_theta);
    std::vector<long> slots;
    box.for_each_edge([&](const IVec&, int, long slot) { slots.push_back(slot); });
    auto stats = run_chunks(trials, threads, [&](long long t, ChunkStat& st) {
      WeightConfiguration cfg =
          sample_configuration(box, tl.law, seed, static_cast<std::uint64_t>(t));
      if (!indicator(cfg)) return;
      ++st.hits;
      double log_lr = 0;
      for (long s : slots) log_lr += tl.log_normalizer - tl.theta * cfg.weight(s);
      double w = std::exp(log_lr);
      st.sum_w += w;
      st.sum_w2 += w * w;
    });
    double sw = 0, sw2 = 0;
    for (const auto& st : stats) {
      out.hits += st.hits;
      sw += st.sum_w;
      sw2 += st.sum_w2;
    }
    out.p_hat = sw / trials;
    out.lr_mean = out.p_hat;
    out.lr_var = std::max(0.0, sw2 / trials - out.p_hat * out.p_hat);
    double se = std::sqrt(out.lr_var / trials);
    out.ci_lo = std::max(0.0, out.p_hat - kZ95 * se);
    out.ci_hi = std::min(1.0, out.p_hat + kZ95 * se);
    out.theta = *tilt_theta;
    out.method = "tilted-mc";
  }

  if (out.p_hat > 0) {
    out.rate = -std::log(out.p_hat) / nd;
  } else {
    // rule of three: P <= 3/trials with ~95% confidence
    out.zero_hits = true;
    out.ci_hi = std::min(out.ci_hi, 3.0 / trials);
    out.rate = -std::log(3.0 / trials) / nd;
  }
  return out;
}

RateEstimate estimate_probability(const BoundedLaw& law, const LdEvent& event,
                                  long long trials, std::optional<double> tilt_theta,
                                  std::uint64_t seed, int threads) {
  LatticeBox box = event.required_box();
  RateEstimate out = estimate_probability(
      box, law, [&](const WeightConfiguration& c) { return event_indicator(c, event); },
      event.n, event.window.dim(), trials, tilt_theta, seed, threads);
  out.eps = event.eps;
  out.eps_slack = 2.0 * law.support_max() / event.k;
  return out;
}

std::vector<RateEstimate> elementary_rate_sequence(const Seminorm& g, double eps,
                                                   const std::vector<int>& n_list,
                                                   const BoundedLaw& law,
                                                   long long trials,
                                                   std::optional<double> tilt_theta,
                                                   std::uint64_t seed, int threads) {
  const int d = g.dim();
  ConvexWindow unit = ConvexWindow::box(Vec(d, 0.0), Vec(d, 1.0));
  std::vector<RateEstimate> out;
  for (int n : n_list) {
    LdEvent evt = LdEvent::one_sided_lower(unit, n, g, eps);
    out.push_back(estimate_probability(law, evt, trials, tilt_theta,
                                       seed + static_cast<std::uint64_t>(n), threads));
  }
  return out;
}

// ---------------------------------------------------------------------------
// subadditive assembly

AssemblyReport subadditive_assembly_check(const Seminorm& g, double eps, double delta,
                                          int n, int k, const BoundedLaw& law,
                                          long long samples, std::uint64_t seed) {
  const int d = g.dim();
  const double b = law.support_max();
  if (n * delta < 1.0)
    throw invalid_input("assembly: need n*delta >= 1 so tiles are edge-disjoint");
  const long spacing = static_cast<long>(std::floor(n * (1.0 + delta)));
  const int m = static_cast<int>(std::floor(n * k * (1.0 + delta))) + 1;
  const double tail = law.tail_mass(b - eps);
  if (tail <= 0) throw invalid_input("assembly: nu([b-eps, b]) = 0");

  AssemblyReport rep;
  rep.n = n;
  rep.k = k;
  rep.m = m;
  rep.dim = d;
  rep.eps = eps;
  rep.delta = delta;
  rep.tolerance = 4.0 * d * (eps + delta);
  rep.samples = samples;

  ConvexWindow unit = ConvexWindow::box(Vec(d, 0.0), Vec(d, 1.0));
  LdEvent tile_evt = LdEvent::one_sided_lower(unit, n, g, delta * delta);
  LatticeBox tile_box = tile_evt.required_box();
  LdEvent big_evt = LdEvent::two_sided(unit, m, g, rep.tolerance);
  LatticeBox big_box = big_evt.required_box();

  const long tiles_total = static_cast<long>(std::llround(std::pow(k, d)));
  std::uint64_t tile_stream = 1;       // rejection streams
  std::uint64_t corridor_stream = 1;   // separate seed space for corridors

  CounterRng corridor_rng(seed ^ 0xC0221D02ULL, 0);

  for (long long s = 0; s < samples; ++s) {
    // draw k^d accepted tiles
    std::vector<WeightConfiguration> tiles;
    while (static_cast<long>(tiles.size()) < tiles_total) {
      WeightConfiguration cand = sample_configuration(tile_box, law, seed, tile_stream++);
      ++rep.tile_draws;
      if (event_indicator(cand, tile_evt)) {
        ++rep.tile_accepts;
        tiles.push_back(std::move(cand));
      }
    }

    // corridor base: every edge conditioned on [b-eps, b]
    WeightConfiguration big(big_box, law, seed, corridor_stream);
    big_box.for_each_edge([&](const IVec&, int, long slot) {
      big.set_weight(slot, law.sample_tail(b - eps, corridor_rng,
                                           corridor_stream * 0x10000000ULL +
                                               static_cast<std::uint64_t>(slot)));
    });
    ++corridor_stream;

    // paste the tiles at spacing floor(n(1+delta))
    IVec v(d, 0);
    long tile_id = 0;
    while (true) {
      const WeightConfiguration& tc = tiles[tile_id];
      tile_box.for_each_edge([&](const IVec& base, int axis, long slot) {
        IVec shifted = base;
        for (int i = 0; i < d; ++i) shifted[i] += spacing * v[i];
        big.set_weight(big_box.edge_slot(shifted, axis), tc.weight(slot));
      });
      ++tile_id;
      int ax = d - 1;
      while (ax >= 0) {
        if (++v[ax] <= k - 1) break;
        v[ax] = 0;
        --ax;
      }
      if (ax < 0) break;
    }

    // evaluate the two-sided event at scale m and record the worst gap
    GridMetric R = rescaled_metric(big, unit, m, m);
    double gap = 0;
    for (int i = 0; i < R.size(); ++i)
      for (int j = i + 1; j < R.size(); ++j)
        gap = std::max(gap, std::abs(R.value(i, j) - big_evt.target_at(R.point(i),
                                                                       R.point(j))));
    rep.max_two_sided_gap = std::max(rep.max_two_sided_gap, gap);
    if (gap <= rep.tolerance) ++rep.inclusion_hits;
  }

  rep.inclusion_all = rep.inclusion_hits == samples;
  rep.tile_acceptance =
      static_cast<double>(rep.tile_accepts) / static_cast<double>(rep.tile_draws);
  const double nd = pow_int(n, d), md = pow_int(m, d);
  rep.rate_n = rep.tile_acceptance > 0
                   ? -std::log(rep.tile_acceptance) / nd
                   : std::numeric_limits<double>::infinity();
  const long corridor_edges = big_box.edge_count() - tiles_total * tile_box.edge_count();
  rep.corridor_term = -(static_cast<double>(corridor_edges) / md) * std::log(tail);
  rep.certified_rate_m_upper =
      (static_cast<double>(tiles_total) * nd / md) * rep.rate_n + rep.corridor_term;
  return rep;
}

// ---------------------------------------------------------------------------
// time constant

std::vector<TimeConstantPoint> time_constant(const BoundedLaw& law, const Vec& x,
                                             const std::vector<int>& n_list,
                                             long long reps, std::uint64_t seed,
                                             int threads) {
  const int d = static_cast<int>(x.size());
  const double a = law.support_min(), b = law.support_max();
  if (!(a > 0))
    throw invalid_input("time_constant: needs a > 0 (declare subcriticality by truncating)");
  std::vector<TimeConstantPoint> out;
  for (int n : n_list) {
    IVec target(d);
    for (int i = 0; i < d; ++i) target[i] = std::lround(n * x[i]);
    long norm1 = 0;
    for (long t : target) norm1 += std::labs(t);
    const long inflate = static_cast<long>(std::ceil((b / a - 1) / 2 * norm1)) + 1;
    IVec lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(0L, target[i]) - inflate;
      hi[i] = std::max(0L, target[i]) + inflate;
    }
    LatticeBox box(lo, hi);
    IVec origin(d, 0);

    std::vector<double> vals(reps, 0.0);
    auto stats = run_chunks(reps, threads, [&](long long r, ChunkStat&) {
      WeightConfiguration cfg = sample_configuration(
          box, law, seed + static_cast<std::uint64_t>(n),
          static_cast<std::uint64_t>(r));
      auto res = discrete_passage_time(cfg, origin, target);
      vals[r] = res.time / n;
    });
    (void)stats;
    double mean = 0;
    for (double v : vals) mean += v;
    mean /= reps;
    double var = 0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var = reps > 1 ? var / (reps - 1) : 0.0;
    TimeConstantPoint pt;
    pt.n = n;
    pt.mean = mean;
    pt.half_width = kZ95 * std::sqrt(var / reps);
    pt.reps = reps;
    out.push_back(pt);
  }
  return out;
}

ProbeResult rate_zero_region_probe(const Seminorm& g, const BoundedLaw& law,
                                   int probe_n, long long reps, std::uint64_t seed,
                                   int threads) {
  const int d = g.dim();
  const double b = law.support_max();
  ProbeResult out;

  if (g.sup_on_sphere() >= b - 1e-9) {
    double atom_b = law.atom_mass(b);
    if (atom_b > 0) {
      out.verdict = RateVerdict::FiniteAtCeiling;
      out.ceiling_bound = -d * std::log(atom_b);
      out.reason = "g touches the b-envelope and nu({b}) > 0";
    } else {
      out.verdict = RateVerdict::Infinite;
      out.reason = "g touches the b-envelope and nu({b}) = 0";
    }
    return out;
  }

  const auto dirs = l1_sphere_directions(d, d == 2 ? 8 : 26);
  double worst_gap = -std::numeric_limits<double>::infinity();
  for (const Vec& u : dirs) {
    auto pts = time_constant(law, u, {probe_n}, reps, seed, threads);
    double mu_hat = pts[0].mean, ci = pts[0].half_width;
    worst_gap = std::max(worst_gap, g(u) - (mu_hat + ci));
  }
  out.mu_gap = worst_gap;
  if (worst_gap <= 0) {
    out.verdict = RateVerdict::Zero;
    out.reason = "g <= mu_hat on all sampled directions";
  } else {
    out.verdict = RateVerdict::PositiveFinite;
    out.reason = "g exceeds mu_hat in some direction";
  }
  return out;
}

}  // namespace fpp
