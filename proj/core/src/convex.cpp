#include "fpp/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace fpp {

namespace {

double linf_norm(const Vec& u) {
  double m = 0;
  for (double x : u) m = std::max(m, std::abs(x));
  return m;
}

Vec cross3(const Vec& u, const Vec& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
          u[0] * v[1] - u[1] * v[0]};
}

// Separating-axis test between an axis box [blo,bhi] and a vertex set.
// Touching counts as separated: tiles(k) wants intersections of positive
// measure, so a shared face must not register as overlap.
bool sat_disjoint_on(const Vec& axis, const Vec& blo, const Vec& bhi,
                     const std::vector<Vec>& verts) {
  double bmin = 0, bmax = 0;
  for (std::size_t i = 0; i < blo.size(); ++i) {
    if (axis[i] >= 0) {
      bmin += axis[i] * blo[i];
      bmax += axis[i] * bhi[i];
    } else {
      bmin += axis[i] * bhi[i];
      bmax += axis[i] * blo[i];
    }
  }
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -vmin;
  for (const Vec& v : verts) {
    double t = dot(axis, v);
    vmin = std::min(vmin, t);
    vmax = std::max(vmax, t);
  }
  const double tol = 1e-12 * (1 + std::abs(bmax) + std::abs(vmax));
  return bmax <= vmin + tol || vmax <= bmin + tol;
}

}  // namespace

ConvexWindow ConvexWindow::box(Vec lo, Vec hi) {
  if (lo.empty() || lo.size() != hi.size())
    throw invalid_input("ConvexWindow::box: dimension mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw invalid_input("ConvexWindow::box: empty interior");
  ConvexWindow w;
  w.d_ = static_cast<int>(lo.size());
  w.is_box_ = true;
  w.lo_ = std::move(lo);
  w.hi_ = std::move(hi);
  // corners, for diameter and tile tests
  const int d = w.d_;
  for (long mask = 0; mask < (1L << d); ++mask) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = (mask >> i & 1) ? w.hi_[i] : w.lo_[i];
    w.verts_.push_back(v);
  }
  for (int i = 0; i < d; ++i) {
    Vec n(d, 0.0);
    n[i] = 1;
    w.faces_.push_back({n, w.hi_[i]});
    n[i] = -1;
    w.faces_.push_back({n, -w.lo_[i]});
  }
  return w;
}

void ConvexWindow::build_faces_from_vertices() {
  faces_.clear();
  if (d_ == 2) {
    // convex hull by monotone chain, faces from hull edges
    std::vector<Vec> pts = verts_;
    std::sort(pts.begin(), pts.end());
    auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
      return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Vec> hull;
    for (int pass = 0; pass < 2; ++pass) {
      std::size_t start = hull.size();
      for (const Vec& p : pts) {
        while (hull.size() >= start + 2 &&
               cross(hull[hull.size() - 2], hull.back(), p) <= 0)
          hull.pop_back();
        hull.push_back(p);
      }
      hull.pop_back();
      std::reverse(pts.begin(), pts.end());
    }
    if (hull.size() < 3) throw invalid_input("polytope: degenerate in 2d");
    verts_ = hull;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Vec& p = hull[i];
      const Vec& q = hull[(i + 1) % hull.size()];
      Vec n = {q[1] - p[1], -(q[0] - p[0])};  // outward for ccw hull
      double len = std::hypot(n[0], n[1]);
      n[0] /= len;
      n[1] /= len;
      faces_.push_back({n, dot(n, p)});
    }
  } else if (d_ == 3) {
    // brute-force face enumeration over vertex triples
    const double scale = 1 + l1_diameter();
    const std::size_t m = verts_.size();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k) {
          Vec n = cross3(verts_[j] - verts_[i], verts_[k] - verts_[i]);
          double len = std::sqrt(dot(n, n));
          if (len < 1e-12 * scale * scale) continue;
          n = (1.0 / len) * n;
          double c = dot(n, verts_[i]);
          bool all_below = true, all_above = true;
          for (const Vec& v : verts_) {
            double t = dot(n, v) - c;
            if (t > 1e-9 * scale) all_below = false;
            if (t < -1e-9 * scale) all_above = false;
          }
          if (!all_below && !all_above) continue;
          Halfspace h = all_below ? Halfspace{n, c}
                                  : Halfspace{(-1.0) * n, -c};
          bool dup = false;
          for (const Halfspace& g : faces_)
            if (l1_dist(g.normal, h.normal) < 1e-9 &&
                std::abs(g.offset - h.offset) < 1e-9 * scale)
              dup = true;
          if (!dup) faces_.push_back(h);
        }
    if (faces_.size() < 4) throw invalid_input("polytope: degenerate in 3d");
  } else {
    throw invalid_input("polytope windows only supported for d = 2, 3");
  }
}

ConvexWindow ConvexWindow::polytope(std::vector<Vec> vertices) {
  if (vertices.empty()) throw invalid_input("polytope: no vertices");
  ConvexWindow w;
  w.d_ = static_cast<int>(vertices[0].size());
  w.is_box_ = false;
  w.verts_ = std::move(vertices);
  w.build_faces_from_vertices();
  // nonempty interior check: centroid strictly inside all faces
  Vec c = w.interior_point();
  for (const Halfspace& h : w.faces_)
    if (dot(h.normal, c) > h.offset - 1e-12)
      throw invalid_input("polytope: empty interior");
  return w;
}

ConvexWindow ConvexWindow::from_halfspaces(int d, std::vector<Halfspace> faces) {
  // reconstruct vertices by intersecting d-subsets of faces
  std::vector<Vec> verts;
  auto feasible = [&](const Vec& x) {
    for (const Halfspace& h : faces)
      if (dot(h.normal, x) > h.offset + 1e-9) return false;
    return true;
  };
  const std::size_t m = faces.size();
  if (d == 2) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        const Vec &n1 = faces[i].normal, &n2 = faces[j].normal;
        double det = n1[0] * n2[1] - n1[1] * n2[0];
        if (std::abs(det) < 1e-12) continue;
        Vec x = {(faces[i].offset * n2[1] - faces[j].offset * n1[1]) / det,
                 (n1[0] * faces[j].offset - n2[0] * faces[i].offset) / det};
        if (feasible(x)) verts.push_back(x);
      }
  } else if (d == 3) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k) {
          // solve 3x3 by Cramer
          const Vec &a = faces[i].normal, &b = faces[j].normal,
                    &c = faces[k].normal;
          double det = dot(a, cross3(b, c));
          if (std::abs(det) < 1e-12) continue;
          Vec rhs = {faces[i].offset, faces[j].offset, faces[k].offset};
          Vec x(3);
          // columns replaced via cross products
          Vec bc = cross3(b, c), ca = cross3(c, a), ab = cross3(a, b);
          for (int t = 0; t < 3; ++t)
            x[t] = (rhs[0] * bc[t] + rhs[1] * ca[t] + rhs[2] * ab[t]) / det;
          if (feasible(x)) verts.push_back(x);
        }
  } else {
    throw invalid_input("from_halfspaces: d must be 2 or 3");
  }
  // dedupe
  std::vector<Vec> unique;
  for (const Vec& v : verts) {
    bool dup = false;
    for (const Vec& u : unique)
      if (l1_dist(u, v) < 1e-9) dup = true;
    if (!dup) unique.push_back(v);
  }
  if (unique.size() < static_cast<std::size_t>(d + 1))
    throw invalid_input("erosion result is empty");
  return polytope(std::move(unique));
}

bool ConvexWindow::contains(const Vec& x, double tol) const {
  if (is_box_) {
    for (int i = 0; i < d_; ++i)
      if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
    return true;
  }
  for (const Halfspace& h : faces_)
    if (dot(h.normal, x) > h.offset + tol) return false;
  return true;
}

double ConvexWindow::gauge(const Vec& z, const Vec& x) const {
  if (!contains(z, -1e-12))
    throw invalid_input("gauge: z must be an interior point");
  double g = 0;
  for (const Halfspace& h : faces_) {
    double denom = h.offset - dot(h.normal, z);
    if (denom <= 0) throw invalid_input("gauge: z not strictly interior");
    double num = dot(h.normal, x - z);
    if (num > 0) g = std::max(g, num / denom);
  }
  return g;
}

Vec ConvexWindow::interior_point() const {
  Vec c(d_, 0.0);
  for (const Vec& v : verts_) c = c + v;
  return (1.0 / static_cast<double>(verts_.size())) * c;
}

double ConvexWindow::l1_diameter() const {
  double m = 0;
  for (std::size_t i = 0; i < verts_.size(); ++i)
    for (std::size_t j = i + 1; j < verts_.size(); ++j)
      m = std::max(m, l1_dist(verts_[i], verts_[j]));
  return m;
}

void ConvexWindow::bounds(Vec& lo, Vec& hi) const {
  lo.assign(d_, std::numeric_limits<double>::infinity());
  hi.assign(d_, -std::numeric_limits<double>::infinity());
  for (const Vec& v : verts_)
    for (int i = 0; i < d_; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
}

ConvexWindow ConvexWindow::eroded(double delta) const {
  if (delta <= 0) throw invalid_input("eroded: delta must be > 0");
  if (is_box_) {
    Vec lo = lo_, hi = hi_;
    for (int i = 0; i < d_; ++i) {
      lo[i] += delta;
      hi[i] -= delta;
      if (!(lo[i] < hi[i])) throw invalid_input("erosion result is empty");
    }
    return box(lo, hi);
  }
  // l1 distance to a halfspace boundary scales with the linf norm of n
  std::vector<Halfspace> shifted;
  for (const Halfspace& h : faces_)
    shifted.push_back({h.normal, h.offset - delta * linf_norm(h.normal)});
  return from_halfspaces(d_, std::move(shifted));
}

ConvexWindow ConvexWindow::scaled(double lambda) const {
  if (lambda <= 0) throw invalid_input("scaled: lambda must be > 0");
  if (is_box_) return box(lambda * lo_, lambda * hi_);
  std::vector<Vec> v;
  for (const Vec& p : verts_) v.push_back(lambda * p);
  return polytope(std::move(v));
}

ConvexWindow ConvexWindow::translated(const Vec& z0) const {
  if (is_box_) return box(lo_ + z0, hi_ + z0);
  std::vector<Vec> v;
  for (const Vec& p : verts_) v.push_back(p + z0);
  return polytope(std::move(v));
}

ConvexWindow::Tiles ConvexWindow::tiles(int k) const {
  if (k < 1) throw invalid_input("tiles: k must be >= 1");
  Vec lo, hi;
  bounds(lo, hi);
  IVec vlo(d_), vhi(d_);
  for (int i = 0; i < d_; ++i) {
    vlo[i] = static_cast<long>(std::floor(lo[i] * k)) - 1;
    vhi[i] = static_cast<long>(std::ceil(hi[i] * k)) + 1;
  }
  Tiles out;
  IVec v = vlo;
  const double inv = 1.0 / k;
  while (true) {
    Vec tlo(d_), thi(d_);
    for (int i = 0; i < d_; ++i) {
      tlo[i] = v[i] * inv;
      thi[i] = (v[i] + 1) * inv;
    }
    // inner: all corners inside (convexity makes this exact)
    bool inner = true;
    for (long mask = 0; mask < (1L << d_) && inner; ++mask) {
      Vec c(d_);
      for (int i = 0; i < d_; ++i) c[i] = (mask >> i & 1) ? thi[i] : tlo[i];
      if (!contains(c, 1e-12)) inner = false;
    }
    bool outer;
    if (inner) {
      outer = true;
    } else if (is_box_) {
      // positive-measure overlap: strict interval intersection per axis
      outer = true;
      for (int i = 0; i < d_; ++i)
        if (thi[i] <= lo_[i] + 1e-12 || tlo[i] >= hi_[i] - 1e-12) outer = false;
    } else {
      // separating-axis test: axes = coordinate directions, face normals,
      // and (d=3) cross products of coordinate axes with polytope edges
      outer = true;
      for (int i = 0; i < d_ && outer; ++i) {
        Vec axis(d_, 0.0);
        axis[i] = 1;
        if (sat_disjoint_on(axis, tlo, thi, verts_)) outer = false;
      }
      for (const Halfspace& h : faces_)
        if (outer && sat_disjoint_on(h.normal, tlo, thi, verts_)) outer = false;
      if (outer && d_ == 3) {
        for (int i = 0; i < 3 && outer; ++i) {
          Vec axis(3, 0.0);
          axis[i] = 1;
          for (std::size_t p = 0; p < verts_.size() && outer; ++p)
            for (std::size_t q = p + 1; q < verts_.size() && outer; ++q) {
              Vec e = verts_[q] - verts_[p];
              Vec cr = cross3(axis, e);
              if (std::sqrt(dot(cr, cr)) < 1e-12) continue;
              if (sat_disjoint_on(cr, tlo, thi, verts_)) outer = false;
            }
        }
      }
    }
    if (inner) out.inner.push_back(v);
    if (outer) out.outer.push_back(v);
    // odometer
    int ax = d_ - 1;
    while (ax >= 0) {
      if (++v[ax] <= vhi[ax]) break;
      v[ax] = vlo[ax];
      --ax;
    }
    if (ax < 0) break;
  }
  return out;
}

std::string ConvexWindow::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (is_box_) {
    os << "box";
    for (double v : lo_) os << " " << v;
    for (double v : hi_) os << " " << v;
  } else {
    os << "polytope " << d_ << " " << verts_.size();
    for (const Vec& v : verts_)
      for (double t : v) os << " " << t;
  }
  return os.str();
}

ConvexWindow ConvexWindow::parse(const std::string& text) {
  std::istringstream is(text);
  std::string kind;
  is >> kind;
  if (kind == "box") {
    std::vector<double> vals;
    double t;
    while (is >> t) vals.push_back(t);
    if (vals.empty() || vals.size() % 2 != 0)
      throw invalid_input("window parse: box needs lo.. hi..");
    std::size_t d = vals.size() / 2;
    return box(Vec(vals.begin(), vals.begin() + d),
               Vec(vals.begin() + d, vals.end()));
  }
  if (kind == "polytope") {
    int d;
    std::size_t n;
    is >> d >> n;
    std::vector<Vec> verts(n, Vec(d));
    for (std::size_t i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j)
        if (!(is >> verts[i][j]))
          throw invalid_input("window parse: truncated polytope");
    return polytope(std::move(verts));
  }
  throw invalid_input("window parse: unknown kind " + kind);
}

// ---------------------------------------------------------------------------

double hausdorff_l1(const std::vector<Vec>& A, const std::vector<Vec>& B) {
  if (A.empty() || B.empty())
    throw invalid_input("hausdorff: empty point set");
  double h = 0;
  for (int pass = 0; pass < 2; ++pass) {
    const auto& from = pass == 0 ? A : B;
    const auto& to = pass == 0 ? B : A;
    for (const Vec& x : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& y : to) best = std::min(best, l1_dist(x, y));
      h = std::max(h, best);
    }
  }
  return h;
}

double hausdorff_l1_bucketed(const std::vector<Vec>& A, const std::vector<Vec>& B) {
  if (A.empty() || B.empty())
    throw invalid_input("hausdorff: empty point set");
  // sweep over `to` sorted by first coordinate; |y0 - x0| lower-bounds the
  // l1 distance, which prunes the scan without changing the minimizer
  auto directed = [](const std::vector<Vec>& from, const std::vector<Vec>& to) {
    std::vector<const Vec*> sorted;
    sorted.reserve(to.size());
    for (const Vec& y : to) sorted.push_back(&y);
    std::sort(sorted.begin(), sorted.end(),
              [](const Vec* p, const Vec* q) { return (*p)[0] < (*q)[0]; });
    double h = 0;
    for (const Vec& x : from) {
      auto it = std::lower_bound(
          sorted.begin(), sorted.end(), x[0],
          [](const Vec* p, double v) { return (*p)[0] < v; });
      long i0 = it - sorted.begin();
      double best = std::numeric_limits<double>::infinity();
      for (long r = i0; r < static_cast<long>(sorted.size()); ++r) {
        if ((*sorted[r])[0] - x[0] >= best) break;
        best = std::min(best, l1_dist(x, *sorted[r]));
      }
      for (long l = i0 - 1; l >= 0; --l) {
        if (x[0] - (*sorted[l])[0] >= best) break;
        best = std::min(best, l1_dist(x, *sorted[l]));
      }
      h = std::max(h, best);
    }
    return h;
  };
  return std::max(directed(A, B), directed(B, A));
}

}  // namespace fpp
