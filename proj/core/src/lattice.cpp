#include "fpp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fpp {

LatticeBox::LatticeBox(IVec lower, IVec upper) : lo_(std::move(lower)), hi_(std::move(upper)) {
  if (lo_.empty() || lo_.size() != hi_.size())
    throw invalid_input("LatticeBox: dimension mismatch");
  const int d = dim();
  for (int i = 0; i < d; ++i)
    if (hi_[i] < lo_[i]) throw invalid_input("LatticeBox: upper < lower");

  stride_.assign(d, 1);
  for (int i = d - 2; i >= 0; --i)
    stride_[i] = stride_[i + 1] * (hi_[i + 1] - lo_[i + 1] + 1);
  nvertices_ = stride_[0] * (hi_[0] - lo_[0] + 1);

  nedges_ = 0;
  for (int a = 0; a < d; ++a) {
    long m = hi_[a] - lo_[a];  // edges along axis a per line
    long others = 1;
    for (int j = 0; j < d; ++j)
      if (j != a) others *= hi_[j] - lo_[j] + 1;
    nedges_ += m * others;
  }
}

bool LatticeBox::contains(const IVec& p) const {
  for (int i = 0; i < dim(); ++i)
    if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
  return true;
}

bool LatticeBox::contains_real(const Vec& x) const {
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lo_[i] - 1e-12 || x[i] > hi_[i] + 1e-12) return false;
  return true;
}

long LatticeBox::vertex_rank(const IVec& p) const {
  long r = 0;
  for (int i = 0; i < dim(); ++i) r += (p[i] - lo_[i]) * stride_[i];
  return r;
}

IVec LatticeBox::vertex_at(long rank) const {
  IVec p(dim());
  for (int i = 0; i < dim(); ++i) {
    p[i] = lo_[i] + rank / stride_[i];
    rank %= stride_[i];
  }
  return p;
}

bool LatticeBox::slot_valid(long slot) const {
  const int d = dim();
  const int axis = static_cast<int>(slot % d);
  IVec p = vertex_at(slot / d);
  return p[axis] < hi_[axis];
}

long LatticeBox::edge_slot(const IVec& base, int axis) const {
  return vertex_rank(base) * dim() + axis;
}

void LatticeBox::for_each_edge(
    const std::function<void(const IVec&, int, long)>& fn) const {
  const int d = dim();
  for (long r = 0; r < nvertices_; ++r) {
    IVec p = vertex_at(r);
    for (int a = 0; a < d; ++a)
      if (p[a] < hi_[a]) fn(p, a, r * d + a);
  }
}

// ---------------------------------------------------------------------------
// BoundedLaw

void BoundedLaw::finalize() {
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& x, const Atom& y) { return x.t < y.t; });
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Piece& x, const Piece& y) { return x.lo < y.lo; });
  double total = 0;
  a_ = std::numeric_limits<double>::infinity();
  b_ = -std::numeric_limits<double>::infinity();
  for (const Atom& at : atoms_) {
    if (at.mass < 0) throw invalid_input("BoundedLaw: negative atom mass");
    total += at.mass;
    a_ = std::min(a_, at.t);
    b_ = std::max(b_, at.t);
  }
  for (const Piece& pc : pieces_) {
    if (pc.mass < 0 || pc.hi <= pc.lo)
      throw invalid_input("BoundedLaw: bad density piece");
    total += pc.mass;
    a_ = std::min(a_, pc.lo);
    b_ = std::max(b_, pc.hi);
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw invalid_input("BoundedLaw: total mass != 1");
  if (a_ < 0) throw invalid_input("BoundedLaw: support below 0");
}

BoundedLaw BoundedLaw::dirac(double c) {
  BoundedLaw l;
  l.atoms_ = {{c, 1.0}};
  l.finalize();
  // dirac has a == b; keep b marginally meaningful
  return l;
}

BoundedLaw BoundedLaw::two_point(double a, double b, double p_at_b) {
  if (!(a < b)) throw invalid_input("two_point: need a < b");
  if (p_at_b < 0 || p_at_b > 1) throw invalid_input("two_point: bad p");
  BoundedLaw l;
  l.atoms_ = {{a, 1.0 - p_at_b}, {b, p_at_b}};
  l.finalize();
  return l;
}

BoundedLaw BoundedLaw::uniform(double a, double b) {
  if (!(a < b)) throw invalid_input("uniform: need a < b");
  BoundedLaw l;
  l.pieces_ = {{a, b, 1.0}};
  l.finalize();
  return l;
}

BoundedLaw BoundedLaw::from_atoms(std::vector<Atom> atoms) {
  BoundedLaw l;
  l.atoms_ = std::move(atoms);
  l.finalize();
  return l;
}

double BoundedLaw::atom_mass(double t) const {
  double m = 0;
  for (const Atom& at : atoms_)
    if (at.t == t) m += at.mass;
  return m;
}

double BoundedLaw::tail_mass(double t) const {
  double m = 0;
  for (const Atom& at : atoms_)
    if (at.t >= t) m += at.mass;
  for (const Piece& pc : pieces_) {
    if (t <= pc.lo)
      m += pc.mass;
    else if (t < pc.hi)
      m += pc.mass * (pc.hi - t) / (pc.hi - pc.lo);
  }
  return m;
}

double BoundedLaw::quantile(double u) const {
  // walk the CDF over atoms and pieces merged by position
  double c = 0;
  std::size_t ia = 0, ip = 0;
  while (ia < atoms_.size() || ip < pieces_.size()) {
    bool take_atom;
    if (ia == atoms_.size())
      take_atom = false;
    else if (ip == pieces_.size())
      take_atom = true;
    else
      take_atom = atoms_[ia].t <= pieces_[ip].lo;
    if (take_atom) {
      if (u < c + atoms_[ia].mass) return atoms_[ia].t;  // exact atom value
      c += atoms_[ia].mass;
      ++ia;
    } else {
      const Piece& pc = pieces_[ip];
      if (u < c + pc.mass)
        return pc.lo + (u - c) / pc.mass * (pc.hi - pc.lo);
      c += pc.mass;
      ++ip;
    }
  }
  return b_;  // u rounded up to 1
}

double BoundedLaw::sample_tail(double t0, const CounterRng& rng,
                               std::uint64_t counter) const {
  const double tail = tail_mass(t0);
  if (tail <= 0) throw invalid_input("sample_tail: empty tail");
  // map u into the tail portion of the CDF
  const double head = 1.0 - tail;
  double u = head + rng.uniform(counter) * tail;
  double v = quantile(std::min(u, std::nextafter(1.0, 0.0)));
  return std::max(v, t0);
}

BoundedLaw BoundedLaw::truncated(double alpha) const {
  if (alpha >= b_) throw invalid_input("truncate_law: alpha >= b");
  if (alpha <= a_) return *this;  // idempotent below the support
  BoundedLaw l;
  double mass_at_alpha = 0;
  for (const Atom& at : atoms_) {
    if (at.t <= alpha)
      mass_at_alpha += at.mass;
    else
      l.atoms_.push_back(at);
  }
  for (const Piece& pc : pieces_) {
    if (pc.hi <= alpha) {
      mass_at_alpha += pc.mass;
    } else if (pc.lo >= alpha) {
      l.pieces_.push_back(pc);
    } else {
      double frac = (alpha - pc.lo) / (pc.hi - pc.lo);
      mass_at_alpha += pc.mass * frac;
      l.pieces_.push_back({alpha, pc.hi, pc.mass * (1 - frac)});
    }
  }
  if (mass_at_alpha > 0) l.atoms_.push_back({alpha, mass_at_alpha});
  l.finalize();
  return l;
}

std::string BoundedLaw::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (atoms_.size() == 1 && pieces_.empty()) {
    os << "dirac " << atoms_[0].t;
  } else if (atoms_.size() == 2 && pieces_.empty()) {
    os << "two-point " << atoms_[0].t << " " << atoms_[1].t << " "
       << atoms_[1].mass;
  } else if (atoms_.empty() && pieces_.size() == 1) {
    os << "uniform " << pieces_[0].lo << " " << pieces_[0].hi;
  } else {
    os << "mixture";
    for (const Atom& at : atoms_) os << " atom " << at.t << " " << at.mass;
    for (const Piece& pc : pieces_)
      os << " piece " << pc.lo << " " << pc.hi << " " << pc.mass;
  }
  return os.str();
}

BoundedLaw BoundedLaw::parse(const std::string& text) {
  std::istringstream is(text);
  std::string kind;
  is >> kind;
  if (kind == "dirac") {
    double c;
    is >> c;
    if (!is) throw invalid_input("law parse: dirac needs one value");
    return dirac(c);
  }
  if (kind == "two-point") {
    double a, b, p;
    is >> a >> b >> p;
    if (!is) throw invalid_input("law parse: two-point needs a b p");
    return two_point(a, b, p);
  }
  if (kind == "uniform") {
    double a, b;
    is >> a >> b;
    if (!is) throw invalid_input("law parse: uniform needs a b");
    return uniform(a, b);
  }
  if (kind == "mixture") {
    BoundedLaw l;
    std::string tok;
    while (is >> tok) {
      if (tok == "atom") {
        double t, m;
        is >> t >> m;
        l.atoms_.push_back({t, m});
      } else if (tok == "piece") {
        double lo, hi, m;
        is >> lo >> hi >> m;
        l.pieces_.push_back({lo, hi, m});
      } else {
        throw invalid_input("law parse: unknown mixture token " + tok);
      }
    }
    l.finalize();
    return l;
  }
  throw invalid_input("law parse: unknown kind " + kind);
}

bool BoundedLaw::operator==(const BoundedLaw& o) const {
  if (atoms_.size() != o.atoms_.size() || pieces_.size() != o.pieces_.size())
    return false;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].t != o.atoms_[i].t || atoms_[i].mass != o.atoms_[i].mass)
      return false;
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].lo != o.pieces_[i].lo || pieces_[i].hi != o.pieces_[i].hi ||
        pieces_[i].mass != o.pieces_[i].mass)
      return false;
  return true;
}

TiltedLaw tilt(const BoundedLaw& law, double theta) {
  if (!law.is_discrete())
    throw invalid_input("tilt: exponential tilting requires a discrete law");
  double z = 0;
  for (const auto& at : law.atoms()) z += at.mass * std::exp(theta * at.t);
  std::vector<BoundedLaw::Atom> atoms;
  for (const auto& at : law.atoms())
    atoms.push_back({at.t, at.mass * std::exp(theta * at.t) / z});
  TiltedLaw out;
  out.law = BoundedLaw::from_atoms(std::move(atoms));
  out.theta = theta;
  out.log_normalizer = std::log(z);
  return out;
}

// ---------------------------------------------------------------------------
// WeightConfiguration

WeightConfiguration::WeightConfiguration(LatticeBox box, BoundedLaw law,
                                         std::uint64_t master_seed,
                                         std::uint64_t stream)
    : box_(std::move(box)),
      law_(std::move(law)),
      seed_(master_seed),
      stream_(stream),
      w_(box_.slot_count(), std::numeric_limits<double>::quiet_NaN()) {}

double WeightConfiguration::min_weight() const {
  double m = std::numeric_limits<double>::infinity();
  box_.for_each_edge([&](const IVec&, int, long slot) { m = std::min(m, w_[slot]); });
  return m;
}

double WeightConfiguration::max_weight() const {
  double m = -std::numeric_limits<double>::infinity();
  box_.for_each_edge([&](const IVec&, int, long slot) { m = std::max(m, w_[slot]); });
  return m;
}

WeightConfiguration sample_configuration(const LatticeBox& box,
                                         const BoundedLaw& law,
                                         std::uint64_t master_seed,
                                         std::uint64_t stream) {
  WeightConfiguration cfg(box, law, master_seed, stream);
  CounterRng rng(master_seed, stream);
  box.for_each_edge([&](const IVec&, int, long slot) {
    cfg.w_[slot] = law.sample(rng, static_cast<std::uint64_t>(slot));
  });
  return cfg;
}

}  // namespace fpp
