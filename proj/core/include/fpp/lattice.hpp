#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fpp/geometry.hpp"
#include "fpp/rng.hpp"

namespace fpp {

// A finite box of Z^d.  Vertices are addressed by their lexicographic rank
// (row-major, last coordinate fastest).  An edge is identified by its lower
// endpoint and an axis; the canonical edge order is lexicographic on
// (endpoint rank, axis), which fixes both iteration order and the RNG
// counter assignment.
class LatticeBox {
 public:
  LatticeBox() = default;
  LatticeBox(IVec lower, IVec upper);

  int dim() const { return static_cast<int>(lo_.size()); }
  const IVec& lower() const { return lo_; }
  const IVec& upper() const { return hi_; }
  long extent(int axis) const { return hi_[axis] - lo_[axis]; }

  long vertex_count() const { return nvertices_; }
  long edge_count() const { return nedges_; }

  bool contains(const IVec& p) const;
  bool contains_real(const Vec& x) const;  // the real box spanned by the lattice

  long vertex_rank(const IVec& p) const;
  IVec vertex_at(long rank) const;

  // slot = rank * d + axis; valid iff the edge (p, p+e_axis) stays in the box
  long slot_count() const { return nvertices_ * dim(); }
  bool slot_valid(long slot) const;
  long edge_slot(const IVec& base, int axis) const;

  // visits edges in canonical order
  void for_each_edge(const std::function<void(const IVec&, int, long)>& fn) const;

  bool operator==(const LatticeBox& o) const { return lo_ == o.lo_ && hi_ == o.hi_; }

 private:
  IVec lo_, hi_;
  std::vector<long> stride_;
  long nvertices_ = 0;
  long nedges_ = 0;
};

// A probability law on [a, b] stored as atoms plus uniform density pieces.
// Covers dirac, two-point, uniform, discrete mixtures and every truncation
// of those.  Sampling goes through the inverse CDF so that (i) atoms come
// out exactly representable and (ii) two laws sampled from the same uniform
// draw are coupled monotonically.
class BoundedLaw {
 public:
  struct Atom {
    double t;
    double mass;
  };
  struct Piece {
    double lo, hi;
    double mass;
  };

  static BoundedLaw dirac(double c);
  static BoundedLaw two_point(double a, double b, double p_at_b);
  static BoundedLaw uniform(double a, double b);
  static BoundedLaw from_atoms(std::vector<Atom> atoms);

  double support_min() const { return a_; }
  double support_max() const { return b_; }

  double atom_mass(double t) const;
  double tail_mass(double t) const;  // mass of [t, b]

  bool is_discrete() const { return pieces_.empty(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  double quantile(double u) const;  // u in [0,1)
  double sample(const CounterRng& rng, std::uint64_t counter) const {
    return quantile(rng.uniform(counter));
  }
  // sample conditioned on [t0, b]
  double sample_tail(double t0, const CounterRng& rng, std::uint64_t counter) const;

  // pushforward under t -> max(t, alpha); requires alpha < b
  BoundedLaw truncated(double alpha) const;

  std::string describe() const;
  static BoundedLaw parse(const std::string& text);

  // stochastic order between laws sharing an inverse-CDF coupling
  bool operator==(const BoundedLaw& o) const;

 private:
  BoundedLaw() = default;
  void finalize();

  std::vector<Atom> atoms_;    // sorted by t
  std::vector<Piece> pieces_;  // sorted by lo, disjoint
  double a_ = 0, b_ = 0;
};

// Exponentially tilted law d nu_theta ~ e^{theta t} d nu, discrete laws only.
// log_normalizer = log sum_t nu({t}) e^{theta t}; the likelihood ratio of a
// draw t under the base law vs the tilted one is exp(log_normalizer - theta t).
struct TiltedLaw {
  BoundedLaw law = BoundedLaw::dirac(1.0);
  double theta = 0;
  double log_normalizer = 0;
};
TiltedLaw tilt(const BoundedLaw& law, double theta);

// The random environment tau on a box: one weight per edge.
class WeightConfiguration {
 public:
  WeightConfiguration(LatticeBox box, BoundedLaw law, std::uint64_t master_seed,
                      std::uint64_t stream);

  const LatticeBox& box() const { return box_; }
  const BoundedLaw& law() const { return law_; }
  std::uint64_t master_seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  double weight(long slot) const { return w_[slot]; }
  double weight(const IVec& base, int axis) const {
    return w_[box_.edge_slot(base, axis)];
  }
  void set_weight(long slot, double v) { w_[slot] = v; }

  double min_weight() const;
  double max_weight() const;

 private:
  LatticeBox box_;
  BoundedLaw law_;
  std::uint64_t seed_ = 0, stream_ = 0;
  std::vector<double> w_;

  friend WeightConfiguration sample_configuration(const LatticeBox&,
                                                  const BoundedLaw&,
                                                  std::uint64_t, std::uint64_t);
};

// i.i.d. draws, one per edge, keyed by the edge slot.  Deterministic in
// (master_seed, stream) regardless of evaluation order.
WeightConfiguration sample_configuration(const LatticeBox& box,
                                         const BoundedLaw& law,
                                         std::uint64_t master_seed,
                                         std::uint64_t stream);

inline BoundedLaw truncate_law(const BoundedLaw& law, double alpha) {
  return law.truncated(alpha);
}

}  // namespace fpp
