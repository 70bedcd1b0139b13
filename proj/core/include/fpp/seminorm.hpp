#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fpp/geometry.hpp"

namespace fpp {

// A seminorm on R^d.  Closed forms cover the shapes the theory works with
// (scaled l1, the crossing seminorm g^zeta and pointwise maxima of those);
// the sampled kind stores values on a fixed direction set of the l1 sphere
// and extends them by positive homogeneity (d = 2 interpolates along the
// sphere, d = 3 uses the nearest sampled direction).
class Seminorm {
 public:
  Seminorm() = default;

  static Seminorm scaled_l1(int d, double c);
  static Seminorm weighted_linf(Vec zeta);  // g^zeta(u) = max_i zeta_i |u_i|
  static Seminorm max_of(Seminorm a, Seminorm b);
  static Seminorm sampled(std::vector<Vec> sphere_dirs, std::vector<double> values);

  int dim() const { return d_; }
  double operator()(const Vec& u) const;

  // sup over the l1 unit sphere (the Hom norm of the seminorm)
  double sup_on_sphere() const;
  // min over the l1 unit sphere; 0 detects a kernel
  double min_on_sphere() const;

  bool is_norm() const { return min_on_sphere() > 0; }

  std::string describe() const;
  static Seminorm parse(const std::string& text);

 private:
  enum class Kind { ScaledL1, WeightedLinf, MaxOf, Sampled };
  Kind kind_ = Kind::ScaledL1;
  int d_ = 0;
  double c_ = 0;
  Vec zeta_;
  std::shared_ptr<Seminorm> lhs_, rhs_;
  std::vector<Vec> dirs_;
  std::vector<double> vals_;
};

// `count` directions spread over the l1 unit sphere of R^d (d = 2 or 3).
std::vector<Vec> l1_sphere_directions(int d, int count);

}  // namespace fpp
