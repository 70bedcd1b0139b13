#include <doctest.h>

#include <cmath>
#include <set>

#include "fpp/lattice.hpp"

using namespace fpp;

namespace {

// independent edge enumeration: count nearest-neighbour pairs directly
long count_edges_brute(const LatticeBox& box) {
  long count = 0;
  for (long r = 0; r < box.vertex_count(); ++r) {
    IVec p = box.vertex_at(r);
    for (long s = r + 1; s < box.vertex_count(); ++s) {
      if (l1_dist(p, box.vertex_at(s)) == 1) ++count;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("edge count formula matches enumeration for n <= 6, d <= 3") {
  for (int d = 1; d <= 3; ++d) {
    for (long n = 1; n <= 6; ++n) {
      LatticeBox box(IVec(d, 0), IVec(d, n));
      CHECK(box.edge_count() == count_edges_brute(box));
      // closed form d * n * (n+1)^(d-1)
      long expected = d * n;
      for (int i = 0; i < d - 1; ++i) expected *= n + 1;
      CHECK(box.edge_count() == expected);
    }
  }
  // asymmetric box
  LatticeBox box({-1, 2}, {3, 5});
  CHECK(box.edge_count() == count_edges_brute(box));
}

TEST_CASE("degenerate box is rejected") {
  CHECK_THROWS_AS(LatticeBox({0, 0}, {2, -1}), invalid_input);
}

TEST_CASE("dirac law forces constant weights") {
  LatticeBox box(IVec(2, 0), IVec(2, 2));
  auto cfg = sample_configuration(box, BoundedLaw::dirac(1.0), 7, 0);
  CHECK(box.edge_count() == 12);
  box.for_each_edge([&](const IVec&, int, long slot) {
    CHECK(cfg.weight(slot) == 1.0);
  });
}

TEST_CASE("sampling determinism and stream separation") {
  LatticeBox box(IVec(2, 0), IVec(2, 4));
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto c1 = sample_configuration(box, law, 42, 3);
  auto c2 = sample_configuration(box, law, 42, 3);
  bool identical = true;
  box.for_each_edge([&](const IVec&, int, long slot) {
    if (c1.weight(slot) != c2.weight(slot)) identical = false;
  });
  CHECK(identical);

  int differing_streams = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto c3 = sample_configuration(box, law, 42, 100 + s);
    bool differs = false;
    box.for_each_edge([&](const IVec&, int, long slot) {
      if (c1.weight(slot) != c3.weight(slot)) differs = true;
    });
    if (differs) ++differing_streams;
  }
  CHECK(differing_streams == 50);
}

TEST_CASE("two-point mean within 3 sigma over 10^4 draws") {
  // one edge, 10^4 independent streams
  LatticeBox box({0, 0}, {1, 0});
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  const int trials = 10000;
  double sum = 0;
  for (int t = 0; t < trials; ++t) {
    auto cfg = sample_configuration(box, law, 99, t);
    sum += cfg.weight(box.edge_slot({0, 0}, 0));
  }
  double mean = sum / trials;
  // sd of one draw is 0.5, so 3 sigma of the mean is 1.5e-2
  CHECK(std::abs(mean - 1.5) < 3 * 0.5 / std::sqrt(trials));
}

TEST_CASE("atoms sample to exactly representable values") {
  auto law = BoundedLaw::two_point(1.0, 2.0, 0.25);
  CounterRng rng(5, 5);
  for (int i = 0; i < 100; ++i) {
    double v = law.sample(rng, i);
    CHECK((v == 1.0 || v == 2.0));
  }
  CHECK(law.atom_mass(2.0) == 0.25);
  CHECK(law.tail_mass(1.5) == 0.25);
  CHECK(law.tail_mass(1.0) == 1.0);
}

TEST_CASE("truncation pushes atoms forward") {
  auto law = BoundedLaw::two_point(0, 2, 0.5);
  auto t = truncate_law(law, 1.0);
  CHECK(t.support_min() == 1.0);
  CHECK(t.support_max() == 2.0);
  CHECK(t.atom_mass(1.0) == 0.5);
  CHECK(t.atom_mass(2.0) == 0.5);
}

TEST_CASE("truncation below the support is the identity") {
  auto law = BoundedLaw::dirac(3.0);
  auto t = truncate_law(law, 1.0);
  CHECK(t == law);
  // idempotent for alpha <= a
  auto u = BoundedLaw::uniform(2, 4);
  CHECK(truncate_law(u, 1.5) == u);
}

TEST_CASE("truncating uniform(0,1) at 0.25 gives atom + density") {
  auto t = truncate_law(BoundedLaw::uniform(0, 1), 0.25);
  CHECK(t.atom_mass(0.25) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(t.tail_mass(0.25) == doctest::Approx(1.0));
  CHECK(t.tail_mass(0.5) == doctest::Approx(0.5));
  CHECK(t.support_min() == 0.25);
  // quantile below the atom mass returns the atom exactly
  CHECK(t.quantile(0.1) == 0.25);
  CHECK(t.quantile(0.25 + 0.375) == doctest::Approx(0.25 + 0.5 * 0.75));
}

TEST_CASE("truncation above b is rejected") {
  CHECK_THROWS_AS(truncate_law(BoundedLaw::two_point(1, 2, 0.5), 2.5),
                  invalid_input);
}

TEST_CASE("inverse-CDF sampling couples laws monotonically") {
  auto lo = BoundedLaw::two_point(1, 2, 0.3);
  auto hi = BoundedLaw::two_point(1, 2, 0.7);  // stochastically larger
  CounterRng rng(11, 0);
  for (int i = 0; i < 200; ++i) {
    double u = rng.uniform(i);
    CHECK(lo.quantile(u) <= hi.quantile(u));
  }
}

TEST_CASE("tilted law normalizer and likelihood ratio identity") {
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto tl = tilt(law, 1.5);
  // Z = 0.5 e^{1.5} + 0.5 e^{3}
  double z = 0.5 * std::exp(1.5) + 0.5 * std::exp(3.0);
  CHECK(tl.log_normalizer == doctest::Approx(std::log(z)));
  // nu(t) = nu_theta(t) * Z * exp(-theta t)
  for (double t : {1.0, 2.0}) {
    double lr = std::exp(tl.log_normalizer - tl.theta * t);
    CHECK(tl.law.atom_mass(t) * lr == doctest::Approx(law.atom_mass(t)));
  }
  CHECK_THROWS_AS(tilt(BoundedLaw::uniform(0, 1), 1.0), invalid_input);
}

TEST_CASE("law parse round-trip") {
  for (const auto& l :
       {BoundedLaw::dirac(1.5), BoundedLaw::two_point(1, 2, 0.25),
        BoundedLaw::uniform(0.5, 2.5),
        truncate_law(BoundedLaw::uniform(0, 1), 0.25)}) {
    CHECK(BoundedLaw::parse(l.describe()) == l);
  }
}
