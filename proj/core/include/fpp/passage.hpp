#pragma once

#include <optional>
#include <vector>

#include "fpp/convex.hpp"
#include "fpp/geometry.hpp"
#include "fpp/lattice.hpp"
#include "fpp/metric.hpp"

namespace fpp {

struct GeodesicPath {
  std::vector<Vec> points;
  std::vector<double> segment_times;
  double total_time = 0;
  double l1_length() const;
};

struct PassageResult {
  double time = 0;
  GeodesicPath path;
};

// shortest passage time over discrete paths inside the box
PassageResult discrete_passage_time(const WeightConfiguration& cfg, const IVec& x,
                                    const IVec& y);

// the generalized passage time for real endpoints: infimum over polygonal
// sequences with per-segment cost tau_e |dz| on a shared edge, b |dz|
// otherwise.  Computed exactly on the Hanan grid spanned by the lattice
// coordinates and the query coordinates.
double continuous_passage_time(const WeightConfiguration& cfg, const Vec& x,
                               const Vec& y);
PassageResult continuous_passage_time_with_path(const WeightConfiguration& cfg,
                                                const Vec& x, const Vec& y);

struct BoxPassage {
  double time = 0;
  // lattice-aligned box windows are exact; general convex windows use the
  // conservative edge-inclusion rule and carry an O(1) boundary slack
  bool exact = true;
  double boundary_slack = 0;
};

BoxPassage box_passage_time(const WeightConfiguration& cfg, const ConvexWindow& window,
                            const Vec& x, const Vec& y);

// (1/n) BoxPT_{nX}(nx, ny) sampled on the k-grid of X
GridMetric rescaled_metric(const WeightConfiguration& cfg, const ConvexWindow& window,
                           int n, int k);

struct CrossingTimes {
  Vec values;  // one rescaled face-to-face time per axis
  int n = 0;
};
CrossingTimes crossing_times(const WeightConfiguration& cfg, int n);

struct GrowingBall {
  std::vector<Vec> points;
  double mesh = 0;  // effective mesh (snapped to a multiple of 1/n)
};
GrowingBall growing_ball(const WeightConfiguration& cfg, int n, double mesh);

// lattice-only multi-source distances, restricted to a sub-box; the
// building block behind the operations above
std::vector<double> lattice_distances(const WeightConfiguration& cfg,
                                      const std::vector<long>& source_ranks,
                                      const std::optional<LatticeBox>& restrict_to,
                                      std::vector<long>* parents = nullptr);

}  // namespace fpp
