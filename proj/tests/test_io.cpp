#include <doctest.h>

#include <algorithm>
#include <cstdio>

#include "fpp/io.hpp"

using namespace fpp;

TEST_CASE("configuration dump/load is lossless") {
  LatticeBox box({-1, 0}, {2, 3});
  auto law = truncate_law(BoundedLaw::uniform(0, 1), 0.25);
  auto cfg = sample_configuration(box, law, 12345, 6);
  auto text = dump_configuration(cfg);
  auto back = load_configuration(text);
  CHECK(back.box() == cfg.box());
  CHECK(back.law() == cfg.law());
  CHECK(back.master_seed() == cfg.master_seed());
  CHECK(back.stream() == cfg.stream());
  bool identical = true;
  box.for_each_edge([&](const IVec&, int, long slot) {
    if (back.weight(slot) != cfg.weight(slot)) identical = false;
  });
  CHECK(identical);  // bit-exact round trip at 17 significant digits
}

TEST_CASE("experiment spec parsing") {
  auto spec = ExperimentSpec::parse(
      "# comment\n"
      "law = two-point 1 2 0.5\n"
      "n_list = 4 6 8  # trailing comment\n"
      "eps = 0.25\n"
      "x = 1 0\n");
  CHECK(spec.get("law") == "two-point 1 2 0.5");
  CHECK(spec.get_int_list("n_list") == std::vector<int>{4, 6, 8});
  CHECK(spec.get_double("eps") == 0.25);
  CHECK(spec.get_vec("x") == Vec{1, 0});
  spec.expect_all_consumed();
}

TEST_CASE("unconsumed keys are rejected") {
  auto spec = ExperimentSpec::parse("law = dirac 1\nstray = 1\n");
  spec.get("law");
  CHECK_THROWS_AS(spec.expect_all_consumed(), invalid_input);
}

TEST_CASE("malformed spec lines are rejected") {
  CHECK_THROWS_AS(ExperimentSpec::parse("just words\n"), invalid_input);
  CHECK_THROWS_AS(ExperimentSpec::parse("a = 1\na = 2\n"), invalid_input);
}

TEST_CASE("atomic write then read back") {
  std::string path = "/tmp/fpp_io_test.txt";
  write_file_atomic(path, "payload\n");
  CHECK(read_file(path) == "payload\n");
  std::remove(path.c_str());
}

TEST_CASE("gradient field round trip") {
  auto field = GradientField::tiled(
      ConvexWindow::box({0, 0}, {1, 1}), 1.0, 2.0, 2,
      {Seminorm::scaled_l1(2, 1.5), Seminorm::weighted_linf({1, 2}),
       Seminorm::scaled_l1(2, 1.0), Seminorm::weighted_linf({2, 1})});
  auto text = dump_gradient_field(field);
  auto back = load_gradient_field(text);
  CHECK(back.tiles_per_axis() == 2);
  CHECK(back.bound_a() == 1.0);
  CHECK(back.at({0.1, 0.1})({1, 1}) == field.at({0.1, 0.1})({1, 1}));
  CHECK(back.at({0.9, 0.1})({1, 1}) == field.at({0.9, 0.1})({1, 1}));
}

TEST_CASE("grid metric CSV carries the header and all pairs") {
  auto D = GridMetric::from_norm(ConvexWindow::box({0, 0}, {1, 1}), 2, 1, 2,
                                 Seminorm::scaled_l1(2, 1.5));
  auto csv = dump_grid_metric(D, "n=1 k=2 seed=0");
  CHECK(csv.rfind("# schema:", 0) == 0);
  CHECK(csv.find("n=1 k=2 seed=0") != std::string::npos);
  // 9 points -> 45 triangular rows plus the header line
  long rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 1 + 9 * 10 / 2);
}

TEST_CASE("discretized path CSV lists jump instants") {
  PiecewiseLinearPath sigma;
  sigma.times = {0, 1};
  sigma.points = {{0, 0}, {1, 0}};
  auto dp = discretize_path(sigma, 4.0, 9);
  auto csv = dump_discretized_path(dp);
  CHECK(csv.rfind("# schema:", 0) == 0);
  long rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 1 + dp.p() + 1);
}

TEST_CASE("format_double round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789, 2.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
