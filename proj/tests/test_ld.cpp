#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fpp/ld.hpp"

using namespace fpp;

namespace {

ConvexWindow unit_box() { return ConvexWindow::box({0, 0}, {1, 1}); }

WeightConfiguration unit_config(const BoundedLaw& law, int n, std::uint64_t seed,
                                std::uint64_t stream) {
  return sample_configuration(LatticeBox(IVec(2, 0), IVec(2, n)), law, seed,
                              stream);
}

// two-sample Kolmogorov-Smirnov statistic; values are quantized first so
// that mathematically tied atoms (computed along different float paths)
// are treated as ties
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  auto quantize = [](std::vector<double>& v) {
    for (double& x : v) x = std::round(x * 1e9) / 1e9;
    std::sort(v.begin(), v.end());
  };
  quantize(a);
  quantize(b);
  double stat = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    stat = std::max(stat, std::abs(static_cast<double>(i) / a.size() -
                                   static_cast<double>(j) / b.size()));
  }
  return stat;
}

}  // namespace

TEST_CASE("dirac environment always satisfies its own norm event") {
  auto law = BoundedLaw::dirac(1.5);
  auto evt = LdEvent::two_sided(unit_box(), 4, Seminorm::scaled_l1(2, 1.5), 0.01);
  auto cfg = unit_config(law, 4, 1, 0);
  CHECK(event_indicator(cfg, evt));
}

TEST_CASE("huge tolerance accepts every admissible target") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  // eps >= b * diam(X) = 4 swallows the whole envelope
  auto evt = LdEvent::two_sided(unit_box(), 3, Seminorm::scaled_l1(2, 1.3), 4.0);
  for (std::uint64_t s = 0; s < 10; ++s)
    CHECK(event_indicator(unit_config(law, 3, 2, s), evt));
}

TEST_CASE("one-sided events are nested for ordered targets") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto lo = LdEvent::one_sided_lower(unit_box(), 3, Seminorm::scaled_l1(2, 1.2), 0.3);
  auto hi = LdEvent::one_sided_lower(unit_box(), 3, Seminorm::scaled_l1(2, 1.5), 0.3);
  for (std::uint64_t s = 0; s < 40; ++s) {
    auto cfg = unit_config(law, 3, 3, s);
    if (event_indicator(cfg, hi)) CHECK(event_indicator(cfg, lo));
  }
}

TEST_CASE("slow corridors never destroy a one-sided event") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto evt = LdEvent::one_sided_lower(unit_box(), 3, Seminorm::scaled_l1(2, 1.2), 0.3);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto cfg = unit_config(law, 3, 4, s);
    if (!event_indicator(cfg, evt)) continue;
    auto slowed = cfg;
    cfg.box().for_each_edge([&](const IVec&, int, long slot) {
      if (slot % 3 == 0) slowed.set_weight(slot, 2.0);
    });
    CHECK(event_indicator(slowed, evt));
  }
}

TEST_CASE("exact probability of a dirac event is 0 or 1") {
  auto law = BoundedLaw::dirac(1.0);
  auto yes = LdEvent::two_sided(unit_box(), 2, Seminorm::scaled_l1(2, 1.0), 0.1);
  auto no = LdEvent::two_sided(unit_box(), 2, Seminorm::scaled_l1(2, 1.8), 0.1);
  CHECK(exact_probability(law, yes).p_hat == 1.0);
  CHECK(exact_probability(law, no).p_hat == 0.0);
  CHECK(std::isinf(exact_probability(law, no).rate));
}

TEST_CASE("p = 1 two-point law collapses to the dirac case") {
  auto evt = LdEvent::two_sided(unit_box(), 2, Seminorm::scaled_l1(2, 2.0), 0.1);
  auto as_two_point = exact_probability(BoundedLaw::two_point(1, 2, 1.0), evt);
  auto as_dirac = exact_probability(BoundedLaw::dirac(2.0), evt);
  CHECK(as_two_point.p_hat == as_dirac.p_hat);
}

TEST_CASE("pinned exact probability of a crossing-threshold event") {
  // 12 edges, 4096 equally weighted configurations; the event asks the
  // first rescaled crossing time to reach 1.5
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  LatticeBox box(IVec(2, 0), IVec(2, 2));
  auto ex = exact_probability(
      box, law,
      [](const WeightConfiguration& cfg) {
        return crossing_times(cfg, 2).values[0] >= 1.5;
      },
      2, 2);
  // regression constant from the first enumeration run
  CHECK(ex.p_hat == doctest::Approx(1728.0 / 4096.0).epsilon(1e-12));
  CHECK(ex.exact);
  CHECK(ex.ci_lo == ex.p_hat);  // degenerate interval
}

TEST_CASE("enumeration budget is enforced with a clear message") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto evt = LdEvent::two_sided(unit_box(), 4, Seminorm::scaled_l1(2, 1.5), 0.1);
  CHECK_THROWS_AS(exact_probability(law, evt), budget_exceeded);
}

TEST_CASE("monte carlo agrees with exact within 4 sigma") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto evt = LdEvent::one_sided_lower(unit_box(), 2, Seminorm::scaled_l1(2, 1.4), 0.25);
  auto ex = exact_probability(law, evt);
  auto mc = estimate_probability(law, evt, 4000, std::nullopt, 7, 2);
  double sd = std::sqrt(ex.p_hat * (1 - ex.p_hat) / mc.trials);
  CHECK(std::abs(mc.p_hat - ex.p_hat) <= 4 * sd);
}

TEST_CASE("zero tilt is exactly crude monte carlo") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto evt = LdEvent::one_sided_lower(unit_box(), 2, Seminorm::scaled_l1(2, 1.4), 0.25);
  auto crude = estimate_probability(law, evt, 500, std::nullopt, 9, 1);
  auto tilted0 = estimate_probability(law, evt, 500, 0.0, 9, 1);
  CHECK(crude.p_hat == tilted0.p_hat);
  CHECK(crude.method == tilted0.method);
}

TEST_CASE("tilted estimates are unbiased against exact enumeration") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  // a demanding event: every edge fast path blocked
  auto evt = LdEvent::one_sided_lower(unit_box(), 2, Seminorm::scaled_l1(2, 1.9), 0.05);
  auto ex = exact_probability(law, evt);
  auto is = estimate_probability(law, evt, 20000, 2.5, 11, 2);
  CHECK(is.method == "tilted-mc");
  // 4 sigma of the importance-sampling estimator itself
  double se = std::sqrt(is.lr_var / is.trials);
  CHECK(std::abs(is.p_hat - ex.p_hat) <= 4 * se + 1e-15);
}

TEST_CASE("thread count does not change estimates") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto evt = LdEvent::one_sided_lower(unit_box(), 2, Seminorm::scaled_l1(2, 1.4), 0.25);
  auto t1 = estimate_probability(law, evt, 2000, std::nullopt, 13, 1);
  auto t4 = estimate_probability(law, evt, 2000, std::nullopt, 13, 4);
  CHECK(t1.p_hat == t4.p_hat);
  auto i1 = estimate_probability(law, evt, 2000, 1.5, 13, 1);
  auto i4 = estimate_probability(law, evt, 2000, 1.5, 13, 4);
  CHECK(i1.p_hat == i4.p_hat);
}

TEST_CASE("certain events have rate zero; impossible samples use rule of three") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto certain = LdEvent::one_sided_lower(unit_box(), 3, Seminorm::scaled_l1(2, 1.0), 0.1);
  auto est = estimate_probability(law, certain, 300, std::nullopt, 15, 1);
  CHECK(est.p_hat == 1.0);
  CHECK(est.rate == 0.0);

  auto impossible =
      LdEvent::one_sided_lower(unit_box(), 3, Seminorm::scaled_l1(2, 2.0), 0.001);
  auto zero = estimate_probability(law, impossible, 300, std::nullopt, 15, 1);
  CHECK(zero.zero_hits);
  CHECK(zero.rate == doctest::Approx(-std::log(3.0 / 300) / 9.0));
}

TEST_CASE("elementary rate of the a-envelope is identically zero") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto rows = elementary_rate_sequence(Seminorm::scaled_l1(2, 1.0), 0.05, {2, 3},
                                       law, 200, std::nullopt, 17, 2);
  for (const auto& r : rows) {
    CHECK(r.p_hat == 1.0);
    CHECK(r.rate == 0.0);
  }
}

TEST_CASE("pinned exact elementary rate at n = 3, zeta = b") {
  // with eps = 0.05 every edge must sit at b, so P = 2^{-24} exactly
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto evt = LdEvent::one_sided_lower(unit_box(), 3, Seminorm::scaled_l1(2, 2.0), 0.05);
  auto ex = exact_probability(law, evt);
  CHECK(ex.p_hat == doctest::Approx(std::pow(2.0, -24.0)).epsilon(1e-12));
  CHECK(ex.rate == doctest::Approx(24.0 * std::log(2.0) / 9.0));
}

TEST_CASE("rate estimates are stationary under integer window translation") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  const int n = 3, reps = 200;
  auto here = unit_box();
  auto there = ConvexWindow::box({2, 1}, {3, 2});  // integer translate
  std::vector<double> stat_here, stat_there;
  Seminorm g = Seminorm::scaled_l1(2, 1.4);
  for (int r = 0; r < reps; ++r) {
    auto cfg_here = unit_config(law, n, 19, r);
    auto R1 = rescaled_metric(cfg_here, here, n, n);
    LatticeBox big({0, 0}, {3 * (2 + 1), 3 * (2 + 1)});
    auto cfg_there = sample_configuration(big, law, 23, r);
    auto R2 = rescaled_metric(cfg_there, there, n, n);
    double m1 = 0, m2 = 0;
    for (int i = 0; i < R1.size(); ++i)
      for (int j = i + 1; j < R1.size(); ++j) {
        m1 = std::max(m1, std::abs(R1.value(i, j) -
                                   g(R1.point(i) - R1.point(j))));
        m2 = std::max(m2, std::abs(R2.value(i, j) -
                                   g(R2.point(i) - R2.point(j))));
      }
    stat_here.push_back(m1);
    stat_there.push_back(m2);
  }
  // KS critical value at 1% for two samples of 200: 1.628 sqrt(2/200)
  double crit = 1.628 * std::sqrt(2.0 / reps);
  CHECK(ks_statistic(stat_here, stat_there) < crit);
}

TEST_CASE("assembly tolerance grows linearly in delta") {
  // formula only; the constructive check runs in the acceptance suite
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto r1 = subadditive_assembly_check(Seminorm::scaled_l1(2, 1.25), 0.25, 0.5, 2,
                                       2, law, 1, 29);
  CHECK(r1.tolerance == doctest::Approx(8 * (0.25 + 0.5)));
  CHECK(r1.m == static_cast<int>(std::floor(2 * 2 * 1.5)) + 1);
  CHECK_THROWS_AS(subadditive_assembly_check(Seminorm::scaled_l1(2, 1.25), 0.25,
                                             0.2, 2, 2, law, 1, 29),
                  invalid_input);  // n delta < 1
}

TEST_CASE("dirac assembly is trivially included") {
  auto law = BoundedLaw::dirac(1.5);
  auto rep = subadditive_assembly_check(Seminorm::scaled_l1(2, 1.5), 0.25, 0.5, 2,
                                        2, law, 3, 31);
  CHECK(rep.inclusion_all);
  CHECK(rep.tile_acceptance == 1.0);
  CHECK(rep.rate_n == 0.0);
}

TEST_CASE("time constant of a dirac law is exact at every n") {
  auto pts = time_constant(BoundedLaw::dirac(1.25), {1, 0}, {4, 8}, 5, 37, 2);
  for (const auto& p : pts) {
    CHECK(p.mean == doctest::Approx(1.25));
    CHECK(p.half_width == doctest::Approx(0.0));
  }
}

TEST_CASE("time constant sequence decreases in n (pinned regression)") {
  // seeds recorded; values pinned from the first run
  auto pts = time_constant(BoundedLaw::two_point(1, 2, 0.5), {1, 0}, {32, 64, 128},
                           12, 2026, 2);
  CHECK(pts[0].mean == doctest::Approx(1.4010416666666667).epsilon(1e-12));
  CHECK(pts[1].mean == doctest::Approx(1.3697916666666667).epsilon(1e-12));
  CHECK(pts[2].mean == doctest::Approx(1.35546875).epsilon(1e-12));
  CHECK(pts[0].mean > pts[1].mean);
  CHECK(pts[1].mean > pts[2].mean);
}

TEST_CASE("time constant decreases when the law gets faster") {
  // coupled by shared seeds: two-point(1,2,p) with larger p is slower
  auto fast = time_constant(BoundedLaw::two_point(1, 2, 0.25), {1, 0}, {8}, 8, 41, 2);
  auto slow = time_constant(BoundedLaw::two_point(1, 2, 0.75), {1, 0}, {8}, 8, 41, 2);
  CHECK(fast[0].mean <= slow[0].mean + 1e-12);
}

TEST_CASE("rate-zero probe classifies the envelope cases") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto z = rate_zero_region_probe(Seminorm::scaled_l1(2, 1.0), law, 16, 4, 43, 2);
  CHECK(z.verdict == RateVerdict::Zero);

  auto c = rate_zero_region_probe(Seminorm::scaled_l1(2, 2.0), law, 16, 4, 43, 2);
  CHECK(c.verdict == RateVerdict::FiniteAtCeiling);
  CHECK(c.ceiling_bound == doctest::Approx(2 * std::log(2.0)));

  auto atomless = truncate_law(BoundedLaw::uniform(1, 2), 1.0);
  auto inf = rate_zero_region_probe(Seminorm::scaled_l1(2, 2.0), atomless, 16, 4, 43, 2);
  CHECK(inf.verdict == RateVerdict::Infinite);

  auto pos = rate_zero_region_probe(Seminorm::scaled_l1(2, 1.9), law, 16, 4, 43, 2);
  CHECK(pos.verdict == RateVerdict::PositiveFinite);
  CHECK(pos.mu_gap > 0);
}
