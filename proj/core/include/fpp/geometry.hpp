#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace fpp {

using Vec = std::vector<double>;   // a point of R^d
using IVec = std::vector<long>;    // a lattice point of Z^d

struct invalid_input : std::runtime_error {
  explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};
struct budget_exceeded : std::runtime_error {
  explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};
struct internal_invariant_violation : std::runtime_error {
  explicit internal_invariant_violation(const std::string& what)
      : std::runtime_error(what) {}
};

inline double l1_norm(const Vec& u) {
  double s = 0;
  for (double x : u) s += std::abs(x);
  return s;
}

inline double l1_dist(const Vec& x, const Vec& y) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s;
}

inline long l1_dist(const IVec& x, const IVec& y) {
  long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::labs(x[i] - y[i]);
  return s;
}

inline Vec to_real(const IVec& p) {
  Vec r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = static_cast<double>(p[i]);
  return r;
}

inline Vec operator+(const Vec& x, const Vec& y) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

inline Vec operator-(const Vec& x, const Vec& y) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

inline Vec operator*(double t, const Vec& x) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = t * x[i];
  return r;
}

inline double dot(const Vec& x, const Vec& y) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace fpp
