#include <doctest.h>

#include <cmath>

#include "fpp/passage.hpp"
#include "fpp/rate.hpp"

using namespace fpp;

namespace {

const double kA = 1.0, kB = 2.0;

ConvexWindow unit_box() { return ConvexWindow::box({0, 0}, {1, 1}); }

BoundedLaw two_point() { return BoundedLaw::two_point(kA, kB, 0.5); }

double face_distance(const GridMetric& D, int axis) {
  // min over sampled pairs with x on {x_axis = 0} and y on {x_axis = 1}
  double best = 1e18;
  for (int i = 0; i < D.size(); ++i) {
    if (D.point(i)[axis] != 0.0) continue;
    for (int j = 0; j < D.size(); ++j) {
      if (D.point(j)[axis] != 1.0) continue;
      best = std::min(best, D.value(i, j));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("crossing seminorm evaluates the weighted max") {
  auto g = crossing_seminorm({1, 2});
  CHECK(g({3, 1}) == 3.0);
  auto c = crossing_seminorm({1.5, 1.5});
  CHECK(c({2, -1}) == 3.0);  // 1.5 * linf
  auto k = crossing_seminorm({0, 1});
  CHECK(k({5, 0}) == 0.0);
}

TEST_CASE("integral of a constant field is Leb(X) times the cost") {
  auto model = quadratic_toy_model(1.0, 2);
  auto field = GradientField::constant(unit_box(), kA, kB,
                                       Seminorm::scaled_l1(2, 1.5));
  auto res = integral_rate(field, model, 4);
  CHECK(res.value == doctest::Approx(0.25));  // (1.5-1)^2 * Leb 1
  CHECK(res.inner_sum == doctest::Approx(res.outer_sum));
}

TEST_CASE("piecewise-constant fields integrate additively and exactly") {
  auto model = quadratic_toy_model(0.0, 2);
  auto field = GradientField::tiled(unit_box(), kA, kB, 2,
                                    {Seminorm::scaled_l1(2, 1.0),
                                     Seminorm::scaled_l1(2, 1.0),
                                     Seminorm::scaled_l1(2, 2.0),
                                     Seminorm::scaled_l1(2, 2.0)});
  auto res = integral_rate(field, model, 8);  // aligned tiling
  CHECK(res.value == doctest::Approx(0.5 * 1.0 + 0.5 * 4.0));
}

TEST_CASE("quadrature brackets tighten under refinement") {
  auto model = quadratic_toy_model(0.5, 2);
  auto ball = ConvexWindow::polytope({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  auto field = GradientField::constant(ball, kA, kB, Seminorm::scaled_l1(2, 1.5));
  double prev_gap = 1e18;
  for (int k : {8, 16, 32}) {
    auto res = integral_rate(field, model, k);
    double gap = res.outer_sum - res.inner_sum;
    CHECK(gap >= -1e-12);
    CHECK(gap <= prev_gap + 1e-12);
    prev_gap = gap;
    // sandwich around the exact value Leb = 2
    CHECK(res.inner_sum <= 1.0 * 2.0 + 1e-9);
    CHECK(res.outer_sum >= 1.0 * 2.0 - 1e-9);
  }
}

TEST_CASE("monotone-flagged models pass randomized spot checks") {
  CounterRng rng(69, 0);
  for (const auto& model :
       {kesten_bound_model(two_point(), 2), quadratic_toy_model(1.2, 2),
        empirical_model({{1.0, 0.0}, {1.5, 0.7}, {2.0, 1.4}}, 2)}) {
    REQUIRE(model.monotone);
    for (int t = 0; t < 50; ++t) {
      double s = rng.uniform(2 * t, kA, kB - 0.1);
      double step = rng.uniform(2 * t + 1, 0.0, kB - s);
      CHECK(model.cost(Seminorm::scaled_l1(2, s)) <=
            model.cost(Seminorm::scaled_l1(2, s + step)) + 1e-12);
    }
  }
}

TEST_CASE("integral rate is monotone in the field for monotone models") {
  auto model = kesten_bound_model(two_point(), 2);
  CounterRng rng(71, 0);
  for (int t = 0; t < 10; ++t) {
    std::vector<Seminorm> lo_tiles, hi_tiles;
    for (int c = 0; c < 4; ++c) {
      double s = rng.uniform(8 * t + c, kA, kB - 0.2);
      lo_tiles.push_back(Seminorm::scaled_l1(2, s));
      hi_tiles.push_back(Seminorm::scaled_l1(2, s + 0.2));
    }
    auto lo = GradientField::tiled(unit_box(), kA, kB, 2, lo_tiles);
    auto hi = GradientField::tiled(unit_box(), kA, kB, 2, hi_tiles);
    CHECK(integral_rate(lo, model, 8).value <=
          integral_rate(hi, model, 8).value + 1e-12);
  }
}

TEST_CASE("infinite tiles are reported") {
  auto model = kesten_bound_model(truncate_law(BoundedLaw::uniform(1, 2), 1.0), 2);
  auto field = GradientField::constant(unit_box(), kA, kB,
                                       Seminorm::scaled_l1(2, 2.0));
  auto res = integral_rate(field, model, 2);
  CHECK(res.is_infinite);
  CHECK(res.infinite_tiles.size() == 4);
  CHECK(std::isinf(res.value));
}

TEST_CASE("crossing rate vanishes at the a-floor and is monotone") {
  auto model = kesten_bound_model(two_point(), 2);
  CHECK(crossing_rate({kA, kA}, model, kA) == 0.0);
  double prev = -1;
  for (double z : {1.0, 1.2, 1.5, 1.9, 2.0}) {
    double v = crossing_rate({z, 1.0}, model, kA);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("crossing rate at (b,..,b) is finite iff nu({b}) > 0") {
  auto with_atom = kesten_bound_model(two_point(), 2);
  CHECK(crossing_rate({kB, kB}, with_atom, kA) ==
        doctest::Approx(-2 * std::log(0.5)));
  auto atomless = kesten_bound_model(truncate_law(BoundedLaw::uniform(1, 2), 1.0), 2);
  CHECK(std::isinf(crossing_rate({kB, kB}, atomless, kA)));
}

TEST_CASE("two-slab witness field certifies separate convexity") {
  // zeta and zeta' differ in coordinate 0 only; theta = 0.5 split along
  // axis 0 realizes the interpolated crossing vector at interpolated cost
  auto model = kesten_bound_model(two_point(), 2);
  Vec zeta = {1.2, 1.1}, zeta_p = {1.8, 1.1};
  const double theta = 0.5;
  auto slab = GradientField::tiled(
      unit_box(), kA, kB, 2,
      {Seminorm::max_of(crossing_seminorm(zeta), Seminorm::scaled_l1(2, kA)),
       Seminorm::max_of(crossing_seminorm(zeta), Seminorm::scaled_l1(2, kA)),
       Seminorm::max_of(crossing_seminorm(zeta_p), Seminorm::scaled_l1(2, kA)),
       Seminorm::max_of(crossing_seminorm(zeta_p), Seminorm::scaled_l1(2, kA))});
  auto res = integral_rate(slab, model, 8);
  double combo = theta * crossing_rate(zeta, model, kA) +
                 (1 - theta) * crossing_rate(zeta_p, model, kA);
  CHECK(res.value == doctest::Approx(combo));
  // the witness is feasible: its metric has the interpolated crossing time
  auto D = prescribe_metric(slab, 8);
  double crossing0 = face_distance(D, 0);
  CHECK(crossing0 ==
        doctest::Approx(theta * zeta[0] + (1 - theta) * zeta_p[0]).epsilon(0.02));
  double crossing1 = face_distance(D, 1);
  CHECK(crossing1 == doctest::Approx(zeta[1]).epsilon(0.02));
}

TEST_CASE("point-point rate vanishes at the floor and is monotone in zeta") {
  auto model = kesten_bound_model(two_point(), 2);
  Vec x = {1, 0};
  auto at_floor = point_point_rate(x, kA * 1.0, model, kA, kB, 2, 8, 200);
  CHECK(at_floor.value == 0.0);
  double prev = -1;
  for (double zeta : {1.0, 1.4, 1.8}) {
    auto r = point_point_rate(x, zeta, model, kA, kB, 2, 8, 200);
    CHECK(r.value >= prev - 1e-12);
    CHECK(r.value <= r.trivial_upper_bound + 1e-12);
    CHECK(r.constraint_margin >= -1e-9);
    prev = r.value;
  }
}

TEST_CASE("toy model with a high pivot gives zero point-point rate") {
  Vec x = {1, 0};
  auto model = quadratic_toy_model(1.9, 2);
  auto r = point_point_rate(x, 1.5, model, kA, kB, 2, 8, 200);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("symmetrize fixes reflection-invariant norms") {
  auto D = GridMetric::from_norm(unit_box(), 4, kA, kB, Seminorm::scaled_l1(2, 1.5));
  auto S = symmetrize(D);
  CHECK(uniform_distance(S, D) <= 1e-9);
  CHECK_THROWS_AS(
      symmetrize(GridMetric::from_norm(unit_box(), 5, kA, kB,
                                       Seminorm::scaled_l1(2, 1.5))),
      invalid_input);  // odd grid
}

TEST_CASE("symmetrize preserves crossing distances") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto cfg = sample_configuration(LatticeBox(IVec(2, 0), IVec(2, 4)), two_point(),
                                    97, s);
    auto D = rescaled_metric(cfg, unit_box(), 4, 4);
    auto S = symmetrize(D);
    // grid evaluation of the reflected half-scale pieces carries the
    // interpolation slack 2b/k
    for (int axis = 0; axis < 2; ++axis)
      CHECK(std::abs(face_distance(S, axis) - face_distance(D, axis)) <=
            D.interpolation_slack());
    auto err = validate_grid_metric(S);
    CHECK_MESSAGE(!err.has_value(), err.value_or(""));
  }
}

TEST_CASE("twice-symmetrized metrics are nearly half-period invariant") {
  auto cfg = sample_configuration(LatticeBox(IVec(2, 0), IVec(2, 4)), two_point(),
                                  101, 3);
  auto D = rescaled_metric(cfg, unit_box(), 4, 4);
  auto S2 = symmetrize(symmetrize(D));
  // interior samples translated by (1/2) e_1
  Vec x = {0.0, 0.25}, y = {0.25, 0.5};
  Vec z = {0.5, 0.0};
  double lhs = S2.value_at(x, y);
  double rhs = S2.value_at(x + z, y + z);
  CHECK(lhs == doctest::Approx(rhs).epsilon(0.12));
}

TEST_CASE("ball map of a norm metric is the l1 ball of radius 1/c") {
  auto window = ConvexWindow::box({-1, -1}, {1, 1});
  auto D = GridMetric::from_norm(window, 8, kA, kB, Seminorm::scaled_l1(2, 1.25));
  auto ball = ball_map(D);
  CHECK(!ball.empty());
  for (const Vec& p : ball) CHECK(l1_norm(p) <= 1.0 / 1.25 + 1e-12);
  // every sample inside the exact ball is present
  long expected = 0;
  for (int i = 0; i < D.size(); ++i)
    if (l1_norm(D.point(i)) <= 1.0 / 1.25 + 1e-12) ++expected;
  CHECK(static_cast<long>(ball.size()) == expected);
  CHECK(hausdorff_l1(ball, ball) == 0.0);
}

TEST_CASE("ball map is (1/a)-Lipschitz up to the grid slack") {
  auto window = ConvexWindow::box({-1.5, -1.5}, {1.5, 1.5});
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto c1 = sample_configuration(LatticeBox(IVec(2, -6), IVec(2, 6)), two_point(),
                                   103, 2 * s);
    auto c2 = sample_configuration(LatticeBox(IVec(2, -6), IVec(2, 6)), two_point(),
                                   103, 2 * s + 1);
    auto D1 = rescaled_metric(c1, window, 4, 12);
    auto D2 = rescaled_metric(c2, window, 4, 12);
    double lhs = hausdorff_l1(ball_map(D1), ball_map(D2));
    double rhs = (1.0 / kA) * uniform_distance(D1, D2) + D1.interpolation_slack();
    CHECK(lhs <= rhs + 1e-12);
  }
}
