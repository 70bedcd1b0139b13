#pragma once

#include <cstdint>
#include <vector>

#include "fpp/geometry.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

// A piecewise-linear curve t -> sigma(t) on [times.front(), times.back()].
struct PiecewiseLinearPath {
  std::vector<double> times;   // strictly increasing
  std::vector<Vec> points;     // same length

  Vec eval(double t) const;
  double duration() const { return times.back() - times.front(); }
  // exact l1 arclength of sigma restricted to [t1, t2]
  double l1_arclength(double t1, double t2) const;
};

// Last-visited-integer discretization of lambda * sigma after a random
// translation z chosen so no two coordinates cross integers simultaneously.
// alpha is a nearest-neighbour lattice path; j(t) counts jumps up to time t.
struct DiscretizedPath {
  std::vector<IVec> alpha;          // p+1 lattice points
  std::vector<double> jump_times;   // p jump instants, nondecreasing
  double lambda = 0;
  Vec shift;                        // the translation z, |z|_1 < 1

  long p() const { return static_cast<long>(jump_times.size()); }
  long j_of(double t) const;        // nondecreasing, right-continuous
  const IVec& alpha_at(double t) const { return alpha[j_of(t)]; }
};

DiscretizedPath discretize_path(const PiecewiseLinearPath& sigma, double lambda,
                                std::uint64_t shift_seed);

// Sets every edge along alpha to min(old weight, level).  Returns the new
// configuration; modified_count reports how many weights actually dropped.
struct HighwayResult {
  WeightConfiguration config;
  long modified_count = 0;
  long edge_count = 0;
};
HighwayResult insert_highway(const WeightConfiguration& cfg,
                             const DiscretizedPath& path, double level);

}  // namespace fpp
