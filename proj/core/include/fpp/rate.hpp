#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/metric.hpp"
#include "fpp/seminorm.hpp"

namespace fpp {

// Pluggable elementary cost on seminorms.  The theory pins the structure of
// the integral rate functional; the per-seminorm values have no closed form,
// so they are supplied by a model.
struct CostModel {
  std::string name;
  std::function<double(const Seminorm&)> cost;  // may return +infinity
  bool monotone = false;
  bool reflection_invariant = false;
};

// I_b(g) = -d log nu([sup_{|u|_1 = 1} g(u), b]); infinite when the tail is
// empty, finite at the b-envelope iff nu({b}) > 0
CostModel kesten_bound_model(const BoundedLaw& law, int dim);

// piecewise-linear interpolation of (zeta, rate) pairs evaluated at
// sup_{|u|_1=1} g(u), regularized to be nondecreasing
CostModel empirical_model(std::vector<std::pair<double, double>> zeta_rate_table,
                          int dim);

// toy cost max(0, sup g - pivot)^2, for tests
CostModel quadratic_toy_model(double pivot, int dim);

// g^zeta(u) = max_i zeta_i |u_i|
Seminorm crossing_seminorm(const Vec& zeta);

struct IntegralResult {
  double value = 0;       // outer-tile midpoint quadrature
  double inner_sum = 0;   // tiles fully inside the window
  double outer_sum = 0;   // tiles meeting the window
  bool is_infinite = false;
  std::vector<IVec> infinite_tiles;
};

IntegralResult integral_rate(const GradientField& field, const CostModel& model,
                             int tiling_k);
// gradient estimated at tile midpoints via finite differences
IntegralResult integral_rate(const GridMetric& D, const CostModel& model,
                             int tiling_k, const std::vector<Vec>& directions,
                             const std::vector<double>& h_sequence);

// model cost of max(g^zeta, a |.|_1)
double crossing_rate(const Vec& zeta, const CostModel& model, double a);

struct PointPointResult {
  double value = 0;
  GradientField witness;
  double constraint_margin = 0;  // D(0, x) - zeta for the witness
  double trivial_upper_bound = 0;
  long evaluations = 0;
};

// approximate minimizer of the integral cost over piecewise-constant
// scaled-l1 fields subject to prescribe(field)(0, x) >= zeta, by projected
// coordinate descent from feasible starts
PointPointResult point_point_rate(const Vec& x, double zeta, const CostModel& model,
                                  double a, double b, int tile_k, int grid_m,
                                  int budget);

// the 2^d-fold reflection symmetrization s(D) on [0,1]^d (even grid)
GridMetric symmetrize(const GridMetric& D);

// sublevel set {x on the grid : D(0, x) <= threshold}
std::vector<Vec> ball_map(const GridMetric& D, double threshold = 1.0);

}  // namespace fpp
