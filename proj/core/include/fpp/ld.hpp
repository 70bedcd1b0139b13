#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/metric.hpp"
#include "fpp/passage.hpp"
#include "fpp/seminorm.hpp"

namespace fpp {

// A large-deviation event for the rescaled metric at scale n, evaluated on
// the k-grid of the window.  Grid evaluation is a relaxation of the
// continuum event; the 2b/k slack that upgrades a grid verdict to a
// continuum one is reported alongside every estimate.
struct LdEvent {
  ConvexWindow window;
  int n = 0;
  int k = 0;  // defaults to n
  std::optional<Seminorm> target_norm;
  std::shared_ptr<GridMetric> target_metric;
  double eps = 0;
  bool one_sided = false;  // D' >= target - eps rather than d_inf <= eps

  static LdEvent one_sided_lower(ConvexWindow window, int n, Seminorm g,
                                 double eps, int k = 0);
  static LdEvent two_sided(ConvexWindow window, int n, Seminorm g, double eps,
                           int k = 0);

  LatticeBox required_box() const;
  double target_at(const Vec& x, const Vec& y) const;
};

bool event_indicator(const WeightConfiguration& cfg, const LdEvent& event);

struct RateEstimate {
  int n = 0;
  int dim = 0;
  long long hits = 0;
  long long trials = 0;
  bool exact = false;
  double p_hat = 0;
  double ci_lo = 0, ci_hi = 0;  // Wilson 95% (crude MC), normal (tilted)
  double rate = 0;              // -log(p_hat) / n^d
  bool zero_hits = false;       // rate is then a rule-of-three lower bound
  std::string method;           // exact | crude-mc | tilted-mc
  double theta = 0;
  double lr_mean = 0, lr_var = 0;
  double eps = 0, eps_slack = 0;
};

// Wilson score interval at 95%
double wilson_lower(long long hits, long long trials);
double wilson_upper(long long hits, long long trials);

using ConfigIndicator = std::function<bool(const WeightConfiguration&)>;

// exact probability by weighted enumeration over all atom assignments;
// refuses when edge_count * log2(#atoms) exceeds 24.  slot_lower_bounds,
// when nonempty, is a per-edge necessary condition of the event used to
// skip losing configurations without running the indicator.
RateEstimate exact_probability(const LatticeBox& box, const BoundedLaw& law,
                               const ConfigIndicator& indicator, int n, int dim,
                               const std::vector<double>& slot_lower_bounds = {});
RateEstimate exact_probability(const BoundedLaw& law, const LdEvent& event);

// Monte Carlo with optional exponential tilting; unbiased via the
// likelihood-ratio identity.  Deterministic for fixed (seed, trials),
// independent of the thread count.
RateEstimate estimate_probability(const LatticeBox& box, const BoundedLaw& law,
                                  const ConfigIndicator& indicator, int n, int dim,
                                  long long trials, std::optional<double> tilt_theta,
                                  std::uint64_t seed, int threads = 1);
RateEstimate estimate_probability(const BoundedLaw& law, const LdEvent& event,
                                  long long trials, std::optional<double> tilt_theta,
                                  std::uint64_t seed, int threads = 1);

// empirical rate of LD+_{n,[0,1]^d}(g, eps) for each n
std::vector<RateEstimate> elementary_rate_sequence(const Seminorm& g, double eps,
                                                   const std::vector<int>& n_list,
                                                   const BoundedLaw& law,
                                                   long long trials,
                                                   std::optional<double> tilt_theta,
                                                   std::uint64_t seed,
                                                   int threads = 1);

// Assembles k^d independently sampled tile configurations satisfying
// LD+(g, delta^2) at scale n, separated by slow corridors (weights
// conditioned on [b-eps, b]), into a configuration at scale
// m = floor(n k (1+delta)) + 1, and evaluates the two-sided event
// LD_m(g, C (eps+delta)) with C = 4d on every assembled sample.
struct AssemblyReport {
  int n = 0, k = 0, m = 0, dim = 0;
  double eps = 0, delta = 0;
  double tolerance = 0;  // C (eps + delta)
  long long samples = 0, inclusion_hits = 0;
  long long tile_draws = 0, tile_accepts = 0;
  double tile_acceptance = 0;
  double rate_n = 0;                  // -log acceptance / n^d
  double certified_rate_m_upper = 0;  // from the favorable-event construction
  double corridor_term = 0;           // -(#corridor/m^d) log nu([b-eps, b])
  double max_two_sided_gap = 0;
  bool inclusion_all = false;
};
AssemblyReport subadditive_assembly_check(const Seminorm& g, double eps, double delta,
                                          int n, int k, const BoundedLaw& law,
                                          long long samples, std::uint64_t seed);

struct TimeConstantPoint {
  int n = 0;
  double mean = 0;
  double half_width = 0;  // 1.96 sd / sqrt(reps)
  long long reps = 0;
};
std::vector<TimeConstantPoint> time_constant(const BoundedLaw& law, const Vec& x,
                                             const std::vector<int>& n_list,
                                             long long reps, std::uint64_t seed,
                                             int threads = 1);

enum class RateVerdict { Zero, PositiveFinite, FiniteAtCeiling, Infinite };

struct ProbeResult {
  RateVerdict verdict = RateVerdict::Zero;
  std::string reason;
  double mu_gap = 0;          // max over directions of g(u) - mu_hat(u)
  double ceiling_bound = 0;   // -d log nu({b}) when finite at the ceiling
};
ProbeResult rate_zero_region_probe(const Seminorm& g, const BoundedLaw& law,
                                   int probe_n, long long reps, std::uint64_t seed,
                                   int threads = 1);

}  // namespace fpp
