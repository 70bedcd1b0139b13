#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fpp/convex.hpp"
#include "fpp/geometry.hpp"
#include "fpp/seminorm.hpp"

namespace fpp {

// An admissible metric, represented by its values on a regular sample grid
// of the window.  Every comparison made through this representation carries
// the b-Lipschitz interpolation bound 2b/k.
class GridMetric {
 public:
  GridMetric() = default;

  // samples fn on the k-grid of the window (bounding-box grid intersected
  // with the window)
  static GridMetric sample(const ConvexWindow& window, int k, double a, double b,
                           const std::function<double(const Vec&, const Vec&)>& fn);
  static GridMetric from_norm(const ConvexWindow& window, int k, double a, double b,
                              const Seminorm& g);

  const ConvexWindow& window() const { return window_; }
  int resolution() const { return k_; }
  double step(int axis) const { return step_[axis]; }
  double max_step() const;
  double bound_a() const { return a_; }
  double bound_b() const { return b_; }
  // interpolation slack 2b/k used by every grid-level comparison
  double interpolation_slack() const;

  int size() const { return static_cast<int>(pts_.size()); }
  const Vec& point(int i) const { return pts_[i]; }
  const IVec& multi_index(int i) const { return idx_[i]; }

  double value(int i, int j) const { return vals_[i * size() + j]; }
  void set_value(int i, int j, double v) {
    vals_[i * size() + j] = v;
    vals_[j * size() + i] = v;
  }

  int find(const Vec& x, double tol = 1e-9) const;
  int find(const IVec& multi_index) const;
  double value_at(const Vec& x, const Vec& y) const;

  bool same_grid(const GridMetric& other) const;

 private:
  ConvexWindow window_;
  int k_ = 0;
  double a_ = 0, b_ = 0;
  Vec origin_;   // bounding-box lower corner
  Vec step_;     // per-axis grid step
  std::vector<Vec> pts_;
  std::vector<IVec> idx_;
  std::map<IVec, int> lookup_;
  std::vector<double> vals_;

  void build_grid(const ConvexWindow& window, int k);
  friend GridMetric scale_metric(const GridMetric&, double);
  friend GridMetric translate_metric(const GridMetric&, const Vec&);
  friend class GridMetricBuilder;
};

// test/construction access: assembles a GridMetric from explicit parts
class GridMetricBuilder {
 public:
  static GridMetric subset(const GridMetric& base, const ConvexWindow& window,
                           const std::vector<int>& keep);
};

// diagonal, symmetry, triangle inequality, a|.| <= D <= b|.| envelope;
// returns a description of the first violation, if any
std::optional<std::string> validate_grid_metric(const GridMetric& D,
                                                int triangle_exhaustive_limit = 14);

// d_inf on the common sample grid
double uniform_distance(const GridMetric& D1, const GridMetric& D2);

// max over pairs of min over z of max(D(x,z), D(z,y)) - D(x,y)/2
double midpoint_defect(const GridMetric& D);

// extension to R^d: min( min_{x',y'} b|x-x'| + D(x',y') + b|y-y'| , b|x-y| )
double extend_metric(const GridMetric& D, const Vec& x, const Vec& y);

struct GradientEstimate {
  Seminorm seminorm;
  std::vector<Vec> directions;
  std::vector<double> values;
  bool boundary = false;  // z was on (or outside) the window boundary
};

// finite-difference proxy for the metric gradient: per direction, the
// minimum difference quotient over the h sequence
GradientEstimate estimate_gradient(const GridMetric& D, const Vec& z,
                                   const std::vector<Vec>& directions,
                                   const std::vector<double>& h_sequence);

std::vector<double> default_h_sequence(double window_scale);

// measurable map z -> seminorm, piecewise constant over a tiling of the
// window's bounding box
class GradientField {
 public:
  GradientField() = default;
  static GradientField constant(const ConvexWindow& window, double a, double b,
                                Seminorm g);
  static GradientField tiled(const ConvexWindow& window, double a, double b,
                             int tiles_per_axis, std::vector<Seminorm> tiles);

  const ConvexWindow& window() const { return window_; }
  int tiles_per_axis() const { return t_; }
  double bound_a() const { return a_; }
  double bound_b() const { return b_; }
  const Seminorm& at(const Vec& z) const;
  Seminorm& tile(const IVec& cell);
  const std::vector<Seminorm>& tiles() const { return tiles_; }
  IVec cell_of(const Vec& z) const;
  Vec cell_midpoint(const IVec& cell) const;
  long tile_count() const { return static_cast<long>(tiles_.size()); }

  // every tile is a norm with a|.| <= g <= b|.| (up to tol on the sampled sphere)
  bool norm_valued(double tol = 1e-9) const;

 private:
  ConvexWindow window_;
  int t_ = 1;
  double a_ = 0, b_ = 0;
  Vec origin_, cell_step_;
  std::vector<Seminorm> tiles_;  // row-major over the bounding-box tiling
};

// D(x,y) = inf over grid paths of the prescribed length integral
// (stencil: all moves with linf index radius <= 2)
GridMetric prescribe_metric(const GradientField& field, int fine_resolution);

GridMetric scale_metric(const GridMetric& D, double lambda);
GridMetric translate_metric(const GridMetric& D, const Vec& z0);

// Path infimum of the D-length inside Y.
//
// AllPairs arcs decompose along collinear grid points, which restricts norm
// metrics to themselves on convex subwindows but lets gcd-1 long arcs reuse
// outside shortcuts of lattice metrics.  Lattice arcs (unit steps only) are
// the sound choice for box passage times at b/a <= 2, where geodesics are
// lattice polylines; there the restriction identity holds bit-exactly.
enum class RestrictArcs { AllPairs, Lattice };
GridMetric restrict_metric(const GridMetric& D, const ConvexWindow& Y,
                           RestrictArcs arcs = RestrictArcs::AllPairs);

// Stitching: arc costs are the minimum over covering pieces of
// the piece metric quotient, b|.| where no piece covers
GridMetric stitch_metrics(const std::vector<std::pair<ConvexWindow, GridMetric>>& pieces,
                          const ConvexWindow& ambient, int fine_resolution,
                          double a, double b);

// ---------------------------------------------------------------------------
// corridor lower bound

struct CorridorCheck {
  bool separation_ok = false;
  bool control_ok = false;
  bool intensity_ok = false;
  std::string detail;
  double bound_offset = 0;  // 3 diam(X) (eps + delta2/delta1)
  bool all_ok() const { return separation_ok && control_ok && intensity_ok; }
};

// verifies the three corridor hypotheses for the empirical metric Dprime
// against the target D on grid samples, then reports the certified offset
CorridorCheck corridor_lower_bound(const GridMetric& D_target,
                                   const GridMetric& D_prime,
                                   const std::vector<ConvexWindow>& tiles,
                                   double delta1, double delta2, double eps);

}  // namespace fpp
