#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fpp/geometry.hpp"

namespace fpp {

struct Halfspace {
  Vec normal;     // outward
  double offset;  // n . x <= offset
};

// Compact convex window X with nonempty interior: an axis box in any
// dimension, or a polytope given by its extreme vertices in d = 2 or 3.
class ConvexWindow {
 public:
  ConvexWindow() = default;  // empty; assign before use

  static ConvexWindow box(Vec lo, Vec hi);
  static ConvexWindow polytope(std::vector<Vec> vertices);

  int dim() const { return d_; }
  bool is_box() const { return is_box_; }
  const Vec& box_lo() const { return lo_; }
  const Vec& box_hi() const { return hi_; }
  const std::vector<Vec>& vertices() const { return verts_; }
  const std::vector<Halfspace>& faces() const { return faces_; }

  bool contains(const Vec& x, double tol = 1e-12) const;

  // Minkowski gauge about the interior point z
  double gauge(const Vec& z, const Vec& x) const;

  Vec interior_point() const;  // vertex centroid
  double l1_diameter() const;

  // bounding box of the window
  void bounds(Vec& lo, Vec& hi) const;

  // X^{-delta} = { z in X : l1-dist(z, X^c) >= delta }; throws invalid_input
  // when the erosion is empty
  ConvexWindow eroded(double delta) const;

  ConvexWindow scaled(double lambda) const;
  ConvexWindow translated(const Vec& z0) const;

  // inner / outer tile index sets at resolution k: Tile(v,k) = (v+[0,1]^d)/k
  struct Tiles {
    std::vector<IVec> inner;
    std::vector<IVec> outer;
  };
  Tiles tiles(int k) const;

  std::string describe() const;
  static ConvexWindow parse(const std::string& text);

 private:
  static ConvexWindow from_halfspaces(int d, std::vector<Halfspace> faces);
  void build_faces_from_vertices();

  int d_ = 0;
  bool is_box_ = false;
  Vec lo_, hi_;                  // valid when is_box_
  std::vector<Vec> verts_;
  std::vector<Halfspace> faces_;
};

// Hausdorff distance between finite point sets, l1 ground metric.
double hausdorff_l1(const std::vector<Vec>& A, const std::vector<Vec>& B);

// Grid-bucket accelerated variant; must agree with hausdorff_l1 bit-exactly.
double hausdorff_l1_bucketed(const std::vector<Vec>& A, const std::vector<Vec>& B);

}  // namespace fpp
