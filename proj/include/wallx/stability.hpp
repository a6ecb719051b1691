#pragma once

// Stability data on graded Lie algebras: central charges, strict sectors,
// support certificates, sector group elements, and the height-truncated
// wall-crossing solver.  Everything runs over exact scalars; the floating
// charge mode only changes angle comparisons and is CLI-facing.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wallx/algebra.hpp"
#include "wallx/intlinalg.hpp"
#include "wallx/multipoly.hpp"

namespace wallx {

struct NotNilpotent : std::runtime_error {
  explicit NotNilpotent(const std::string& m) : std::runtime_error(m) {}
};
struct PhaseCollision : std::runtime_error {
  explicit PhaseCollision(const std::string& m) : std::runtime_error(m) {}
};
struct DegenerateCharge : std::runtime_error {
  explicit DegenerateCharge(const std::string& m) : std::runtime_error(m) {}
};

// ---- central charge --------------------------------------------------------

struct CentralCharge {
  int rank = 0;
  std::vector<GaussianRational> z;  // values on the standard basis
  bool floating = false;            // comparisons via doubles + tol
  double tol = 1e-12;

  CentralCharge() = default;
  CentralCharge(std::vector<GaussianRational> values)
      : rank((int)values.size()), z(std::move(values)) {}

  GaussianRational eval(const IntVec& gamma) const {
    if ((int)gamma.size() != rank) throw std::invalid_argument("charge rank mismatch");
    GaussianRational s;
    for (int i = 0; i < rank; ++i)
      if (gamma[i]) s += z[i] * GaussianRational(Rational(gamma[i]), Rational(0));
    return s;
  }
};

// phase equality / clockwise order, honoring the charge mode
inline bool phase_equal(const CentralCharge& zc, const GaussianRational& a,
                        const GaussianRational& b) {
  if (!zc.floating) return arg_equal(a, b);
  double d = std::atan2(a.im.to_double(), a.re.to_double()) -
             std::atan2(b.im.to_double(), b.re.to_double());
  while (d > M_PI) d -= 2 * M_PI;
  while (d < -M_PI) d += 2 * M_PI;
  return std::abs(d) <= zc.tol;
}
inline bool phase_clockwise_before(const CentralCharge& zc, const GaussianRational& a,
                                   const GaussianRational& b) {
  if (!zc.floating) return arg_less(b, a);  // larger principal argument first
  return std::atan2(a.im.to_double(), a.re.to_double()) >
         std::atan2(b.im.to_double(), b.re.to_double());
}

// ---- sectors ---------------------------------------------------------------

// Half-open angular sector [start, end) swept clockwise, angles in units of
// pi, both normalized into (-1, 1], width strictly less than pi.  Exact
// membership needs endpoints on the quarter-pi grid, where the boundary
// directions are integer vectors.
struct Sector {
  Rational start, end;

  Sector(Rational s, Rational e) : start(normalize(s)), end(normalize(e)) {
    Rational w = width();
    if (!(Rational(0) < w && w < Rational(1)))
      throw std::invalid_argument("sector must have width in (0, pi)");
  }

  static Rational normalize(Rational q) {
    while (q > Rational(1)) q = q - Rational(2);
    while (!(q > Rational(-1))) q = q + Rational(2);
    return q;
  }

  Rational width() const {
    Rational w = start - end;
    while (!(w > Rational(0))) w = w + Rational(2);
    while (w > Rational(2)) w = w - Rational(2);
    return w;
  }

  // exact boundary direction; defined only on the quarter-pi grid
  static GaussianRational grid_dir(const Rational& q) {
    Rational t = q * Rational(4);
    if (t.den != 1) throw std::domain_error("sector endpoint off the exact angle grid");
    long long k = t.num;
    switch (k) {
      case -3: return {-1, -1};
      case -2: return {0, -1};
      case -1: return {1, -1};
      case 0: return {1, 0};
      case 1: return {1, 1};
      case 2: return {0, 1};
      case 3: return {-1, 1};
      case 4: return {-1, 0};
      default: throw std::domain_error("sector endpoint off the exact angle grid");
    }
  }

  // z != 0 lies in [start, end)?  Width < pi, so two half-plane tests settle
  // it: weakly clockwise of start, strictly counterclockwise of end.
  bool contains(const GaussianRational& zv) const {
    if (zv.is_zero()) return false;
    GaussianRational s = grid_dir(start), e = grid_dir(end);
    Rational cs = cross(s, zv);
    bool a = cs < Rational(0) || (cs.is_zero() && dot(s, zv) > Rational(0));
    return a && cross(e, zv) > Rational(0);
  }

  // floating membership: clockwise distance from start below width (tol in
  // units of pi)
  bool contains_f(const GaussianRational& zv, double tol) const {
    double a = std::atan2(zv.im.to_double(), zv.re.to_double()) / M_PI;
    double cd = start.to_double() - a;
    while (cd < 0) cd += 2;
    while (cd >= 2) cd -= 2;
    if (cd <= tol || cd >= 2 - tol) cd = 0;
    return cd < width().to_double() - tol;
  }
};

// ---- stability data --------------------------------------------------------

// a: one graded coefficient per lattice class; gens: the height-1 generating
// set S; every support class must be a sum of at most `height` generators.
template <class Coeff>
struct BasicStabilityData {
  CentralCharge charge;
  std::map<IntVec, Coeff> a;
  int height = 6;
  std::vector<IntVec> gens;
};

using StabilityData = BasicStabilityData<LaurentFraction>;

// minimal summand counts of the truncated monoid generated by `gens`
inline std::map<IntVec, int> monoid_heights(const std::vector<IntVec>& gens, int n) {
  std::map<IntVec, int> h;
  std::vector<IntVec> level;
  for (auto& g : gens)
    if (!h.count(g)) {
      h[g] = 1;
      level.push_back(g);
    }
  for (int l = 2; l <= n; ++l) {
    std::vector<IntVec> next;
    for (auto& v : level)
      for (auto& g : gens) {
        IntVec w(v.size());
        for (size_t i = 0; i < v.size(); ++i) w[i] = v[i] + g[i];
        if (!h.count(w)) {
          h[w] = l;
          next.push_back(w);
        }
      }
    level = std::move(next);
  }
  return h;
}

// ---- support certificates --------------------------------------------------

struct SupportCertificate {
  bool pass = false;
  std::optional<IntVec> witness;      // failing class, or the extremal one on pass
  std::optional<Rational> c_squared;  // minimal feasible C^2 in norm mode
  std::string detail;
};

// L1 norm against |Z|: with no bound given, reports the minimal feasible C
// (as C^2, exactly); with a bound, verifies it.
template <class Coeff>
SupportCertificate check_support_norm(const BasicStabilityData<Coeff>& d,
                                      std::optional<Rational> c_squared_bound = std::nullopt) {
  SupportCertificate r;
  Rational best(0);
  for (auto& [gamma, c] : d.a) {
    if (c.is_zero()) continue;
    GaussianRational zv = d.charge.eval(gamma);
    if (zv.is_zero()) {
      r.pass = false;
      r.witness = gamma;
      r.detail = "charge vanishes on a support class";
      return r;
    }
    long long n1 = 0;
    for (auto x : gamma) n1 += std::llabs(x);
    Rational ratio = Rational(n1 * n1) / zv.norm2();
    if (c_squared_bound && ratio > *c_squared_bound) {
      r.pass = false;
      r.witness = gamma;
      r.detail = "norm bound violated";
      return r;
    }
    if (ratio > best) {
      best = ratio;
      r.witness = gamma;
    }
  }
  r.pass = true;
  r.c_squared = c_squared_bound ? *c_squared_bound : best;
  return r;
}

inline Rational quad_eval(const IntMat& q, const IntVec& v) {
  Rational s(0);
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) s = s + Rational(q[i][j] * v[i] * v[j]);
  return s;
}

// quadratic mode: Q <= 0 on an integer kernel basis of Z, Q >= 0 on support
template <class Coeff>
SupportCertificate check_support_quadratic(const BasicStabilityData<Coeff>& d, const IntMat& q) {
  SupportCertificate r;
  long long den = 1;
  for (auto& zv : d.charge.z) {
    den = std::lcm(den, zv.re.den);
    den = std::lcm(den, zv.im.den);
  }
  IntMat a(2, IntVec(d.charge.rank));
  for (int i = 0; i < d.charge.rank; ++i) {
    a[0][i] = d.charge.z[i].re.num * (den / d.charge.z[i].re.den);
    a[1][i] = d.charge.z[i].im.num * (den / d.charge.z[i].im.den);
  }
  auto sol = solve_lattice(a, IntVec{0, 0}, d.charge.rank);
  if (sol)
    for (auto& v : sol->kernel)
      if (quad_eval(q, v) > Rational(0)) {
        r.pass = false;
        r.witness = v;
        r.detail = "form positive on a kernel direction";
        return r;
      }
  for (auto& [gamma, c] : d.a) {
    if (c.is_zero()) continue;
    if (quad_eval(q, gamma) < Rational(0)) {
      r.pass = false;
      r.witness = gamma;
      r.detail = "form negative on a support class";
      return r;
    }
  }
  r.pass = true;
  return r;
}

// ---- target algebra contexts ----------------------------------------------

// Height-truncated quantum torus: group elements are Laurent-fraction
// combinations of e_gamma over the monoid plus the identity class.
struct TorusCtx {
  using Coeff = LaurentFraction;
  using El = QTorusElement<LaurentFraction>;
  using Key = IntVec;

  int rank = 0;
  IntMat pairing;
  int height = 6;
  std::map<IntVec, int> hgt;

  static TorusCtx make(const IntMat& pairing, const std::vector<IntVec>& gens, int n) {
    TorusCtx c;
    c.rank = gens.empty() ? (int)pairing.size() : (int)gens[0].size();
    c.pairing = pairing;
    c.height = n;
    c.hgt = monoid_heights(gens, n);
    return c;
  }

  El zero_el() const { return El(rank); }
  El one() const { return El::basis(rank, IntVec(rank, 0)); }
  void add_lie(El& x, const IntVec& gamma, const Coeff& c) const {
    if (!hgt.count(gamma)) throw std::invalid_argument("class outside the truncated monoid");
    x.add_term(gamma, c);
  }
  El scaled(El x, const Rational& r) const {
    for (auto& [v, c] : x.terms) c = c * LaurentFraction(r);
    return x;
  }
  El truncate(El x) const {
    for (auto it = x.terms.begin(); it != x.terms.end();) {
      bool keep = hgt.count(it->first) ||
                  it->first == IntVec(rank, 0);
      it = keep ? std::next(it) : x.terms.erase(it);
    }
    return x;
  }
  El mul(const El& a, const El& b) const { return truncate(motivic_torus_mul(a, b, pairing)); }

  bool commute(const IntVec& g1, const IntVec& g2) const {
    long long p = 0;
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) p += g1[i] * pairing[i][j] * g2[j];
    return p == 0;
  }

  // finite by height truncation: any (N+1)-fold product of height >= 1
  // classes leaves the monoid
  El exp(const El& x) const {
    if (x.terms.count(IntVec(rank, 0)))
      throw std::invalid_argument("exp needs a height >= 1 argument");
    El acc = one(), pw = one();
    Rational f(1);
    for (int k = 1; k <= height; ++k) {
      pw = mul(pw, x);
      if (pw.is_zero()) break;
      f = f / Rational(k);
      acc = acc + scaled(pw, f);
    }
    return acc;
  }

  // Mercator series, finite for the same reason
  El log(const El& g) const {
    El y = g - one();
    if (y.terms.count(IntVec(rank, 0)))
      throw std::invalid_argument("log needs a group element with unit head");
    El acc = zero_el(), pw = one();
    for (int k = 1; k <= height; ++k) {
      pw = mul(pw, y);
      if (pw.is_zero()) break;
      acc = acc + scaled(pw, Rational((k % 2) ? 1 : -1, k));
    }
    return acc;
  }

  Coeff component(const El& x, const IntVec& gamma) const {
    auto it = x.terms.find(gamma);
    return it == x.terms.end() ? Coeff(0) : it->second;
  }

  int height_of(const IntVec& gamma) const {
    auto it = hgt.find(gamma);
    return it == hgt.end() ? -1 : it->second;
  }

  std::optional<Key> first_diff(const El& a, const El& b) const {
    El d = a - b;
    if (d.terms.empty()) return std::nullopt;
    const IntVec* best = nullptr;
    int bh = 0;
    for (auto& [v, c] : d.terms) {
      int h = hgt.count(v) ? hgt.at(v) : 0;
      if (!best || h < bh) {
        best = &v;
        bh = h;
      }
    }
    return *best;
  }
};

// Nilpotent matrix realization: classes land in fixed entries of an
// upper-triangular matrix algebra over polynomials, graded by band.
struct MatrixCtx {
  using Coeff = MultiPoly;
  using El = Matrix<MultiPoly>;
  using Key = std::pair<int, int>;

  int n = 0, nvars = 0, height = 6;
  std::map<IntVec, Key> slot;
  std::map<IntVec, int> hgt;

  static MatrixCtx make(int n, int nvars, const std::map<IntVec, Key>& slot,
                        const std::vector<IntVec>& gens, int nheight) {
    MatrixCtx c;
    c.n = n;
    c.nvars = nvars;
    c.slot = slot;
    c.height = nheight;
    c.hgt = monoid_heights(gens, nheight);
    return c;
  }

  MultiPoly zp() const { return MultiPoly(nvars); }
  El zero_el() const { return El(n, zp()); }
  El one() const { return El::identity(n, zp(), MultiPoly(nvars, Rational(1))); }
  void add_lie(El& x, const IntVec& gamma, const Coeff& c) const {
    auto it = slot.find(gamma);
    if (it == slot.end()) {
      if (!(c == zp())) throw std::invalid_argument("class has no matrix slot");
      return;
    }
    x.e[it->second.first][it->second.second] = x.e[it->second.first][it->second.second] + c;
  }
  El scaled(El x, const Rational& r) const {
    MultiPoly f(nvars, r);
    for (auto& row : x.e)
      for (auto& v : row) v = v * f;
    return x;
  }
  El mul(const El& a, const El& b) const { return mat_mul(a, b); }

  bool commute(const IntVec& g1, const IntVec& g2) const {
    auto i1 = slot.find(g1), i2 = slot.find(g2);
    if (i1 == slot.end() || i2 == slot.end()) return true;  // no representable content
    return i1->second.second != i2->second.first && i2->second.second != i1->second.first;
  }

  El exp(const El& x) const {
    El acc = one(), pw = one();
    Rational f(1);
    int cap = std::max(n, height);
    for (int k = 1; k <= cap + 1; ++k) {
      pw = mul(pw, x);
      if (pw == zero_el()) break;
      if (k > cap) throw NotNilpotent("matrix exponential does not terminate");
      f = f / Rational(k);
      acc = acc + scaled(pw, f);
    }
    return acc;
  }

  El log(const El& g) const {
    El y = g - one();
    El acc = zero_el(), pw = one();
    int cap = std::max(n, height);
    for (int k = 1; k <= cap + 1; ++k) {
      pw = mul(pw, y);
      if (pw == zero_el()) break;
      if (k > cap) throw NotNilpotent("matrix logarithm does not terminate");
      acc = acc + scaled(pw, Rational((k % 2) ? 1 : -1, k));
    }
    return acc;
  }

  Coeff component(const El& x, const IntVec& gamma) const {
    auto it = slot.find(gamma);
    return it == slot.end() ? zp() : x.e[it->second.first][it->second.second];
  }

  int height_of(const IntVec& gamma) const {
    auto it = hgt.find(gamma);
    return it == hgt.end() ? -1 : it->second;
  }

  std::optional<Key> first_diff(const El& a, const El& b) const {
    for (int band = 1; band < n; ++band)
      for (int i = 0; i + band < n; ++i)
        if (!(a.e[i][i + band] == b.e[i][i + band])) return Key{i, i + band};
    for (int i = 0; i < n; ++i)
      if (!(a.e[i][i] == b.e[i][i])) return Key{i, i};
    return std::nullopt;
  }
};

// ---- ray decomposition -----------------------------------------------------

inline bool proportional(const IntVec& a, const IntVec& b) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j)
      if (a[i] * b[j] != a[j] * b[i]) return false;
  return true;
}

// group classes by charge phase, clockwise (decreasing argument); colliding
// non-proportional classes must commute or the tie cannot be broken
template <class CtxT>
std::vector<std::vector<IntVec>> clockwise_rays(const CentralCharge& zc,
                                                const std::vector<IntVec>& supp,
                                                const CtxT& ctx) {
  std::vector<std::pair<GaussianRational, std::vector<IntVec>>> rays;
  for (auto& gamma : supp) {
    GaussianRational zv = zc.eval(gamma);
    if (zv.is_zero()) throw DegenerateCharge("charge vanishes on a class");
    bool placed = false;
    for (auto& [rep, members] : rays)
      if (phase_equal(zc, rep, zv)) {
        for (auto& m : members)
          if (!proportional(m, gamma) && !ctx.commute(m, gamma))
            throw PhaseCollision("non-proportional non-commuting classes share a phase");
        members.push_back(gamma);
        placed = true;
        break;
      }
    if (!placed) rays.push_back({zv, {gamma}});
  }
  std::sort(rays.begin(), rays.end(), [&](const auto& x, const auto& y) {
    return phase_clockwise_before(zc, x.first, y.first);
  });
  std::vector<std::vector<IntVec>> out;
  for (auto& [rep, members] : rays) {
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

// all generator charges inside an open half-plane (strict cone); exact
// cross/dot scan over boundary candidates drawn from the directions
inline void require_strict_cone(const CentralCharge& zc, const std::vector<IntVec>& gens) {
  std::vector<GaussianRational> d;
  for (auto& g : gens) {
    GaussianRational zv = zc.eval(g);
    if (zv.is_zero()) throw DegenerateCharge("charge vanishes on a generator");
    d.push_back(zv);
  }
  auto within_half_turn_cw = [](const GaussianRational& from, const GaussianRational& x) {
    Rational c = cross(from, x);
    return c < Rational(0) || (c.is_zero() && dot(from, x) > Rational(0));
  };
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = 0; j < d.size(); ++j) {
      if (i != j && !within_half_turn_cw(d[i], d[j])) continue;  // j must be cw of i
      bool ok = true;
      for (size_t k = 0; k < d.size() && ok; ++k)
        ok = within_half_turn_cw(d[i], d[k]) &&
             (cross(d[j], d[k]) > Rational(0) ||
              (cross(d[j], d[k]).is_zero() && dot(d[j], d[k]) > Rational(0)));
      if (ok) return;
    }
  throw std::domain_error("generator charges do not span a strict cone");
}

// ---- sector elements and factorization --------------------------------------

template <class CtxT>
std::vector<IntVec> sector_support(const BasicStabilityData<typename CtxT::Coeff>& d,
                                   const Sector& v, const CtxT&) {
  std::vector<IntVec> s;
  for (auto& [gamma, c] : d.a) {
    if (c.is_zero()) continue;
    GaussianRational zv = d.charge.eval(gamma);
    if (zv.is_zero()) continue;
    bool in = d.charge.floating ? v.contains_f(zv, d.charge.tol) : v.contains(zv);
    if (in) s.push_back(gamma);
  }
  return s;
}

// exp of the summed sector content — the one-shot group element
template <class CtxT>
typename CtxT::El sector_element(const BasicStabilityData<typename CtxT::Coeff>& d,
                                 const Sector& v, const CtxT& ctx) {
  auto x = ctx.zero_el();
  for (auto& gamma : sector_support(d, v, ctx)) ctx.add_lie(x, gamma, d.a.at(gamma));
  return ctx.exp(x);
}

// clockwise product of per-ray exponentials over the sector
template <class CtxT>
typename CtxT::El sector_product(const BasicStabilityData<typename CtxT::Coeff>& d,
                                 const Sector& v, const CtxT& ctx) {
  auto rays = clockwise_rays(d.charge, sector_support(d, v, ctx), ctx);
  auto acc = ctx.one();
  for (auto& ray : rays) {
    auto x = ctx.zero_el();
    for (auto& gamma : ray) ctx.add_lie(x, gamma, d.a.at(gamma));
    acc = ctx.mul(acc, ctx.exp(x));
  }
  return acc;
}

template <class CtxT>
struct FactorReport {
  bool pass = false;
  std::optional<typename CtxT::Key> where;  // first differing graded component
  typename CtxT::El direct, product;
};

// The two sector elements agree exactly when the rays commute; otherwise the
// first discrepancy (lowest grade) is reported.  This is the executable
// reason the factorization property pins down the ray data.
template <class CtxT>
FactorReport<CtxT> factor_check(const BasicStabilityData<typename CtxT::Coeff>& d,
                                const Sector& v, const CtxT& ctx) {
  FactorReport<CtxT> r;
  r.direct = sector_element(d, v, ctx);
  r.product = sector_product(d, v, ctx);
  r.where = ctx.first_diff(r.direct, r.product);
  r.pass = !r.where.has_value();
  return r;
}

// ---- wall crossing ----------------------------------------------------------

// Recompute ray data under a new charge so the clockwise ray product is
// unchanged.  Height induction: with all lower heights fixed, the height-h
// component of log(old product) - log(partial new product) is exactly the
// missing coefficient at each height-h class.
template <class CtxT>
BasicStabilityData<typename CtxT::Coeff> wall_cross(
    const BasicStabilityData<typename CtxT::Coeff>& d, const CentralCharge& zn,
    const CtxT& ctx) {
  for (auto& [gamma, h] : ctx.hgt)
    if (zn.eval(gamma).is_zero())
      throw DegenerateCharge("new charge vanishes on a monoid class");
  require_strict_cone(d.charge, d.gens);
  require_strict_cone(zn, d.gens);

  std::vector<IntVec> supp;
  for (auto& [gamma, c] : d.a)
    if (!c.is_zero()) {
      if (ctx.height_of(gamma) < 0)
        throw std::invalid_argument("support class outside the truncated monoid");
      supp.push_back(gamma);
    }
  auto old_rays = clockwise_rays(d.charge, supp, ctx);
  auto m = ctx.one();
  for (auto& ray : old_rays) {
    auto x = ctx.zero_el();
    for (auto& gamma : ray) ctx.add_lie(x, gamma, d.a.at(gamma));
    m = ctx.mul(m, ctx.exp(x));
  }
  auto log_m = ctx.log(m);

  std::vector<IntVec> mono;
  for (auto& [gamma, h] : ctx.hgt) mono.push_back(gamma);
  auto new_rays = clockwise_rays(zn, mono, ctx);

  BasicStabilityData<typename CtxT::Coeff> out;
  out.charge = zn;
  out.height = d.height;
  out.gens = d.gens;
  for (int h = 1; h <= d.height; ++h) {
    auto p = ctx.one();
    for (auto& ray : new_rays) {
      auto x = ctx.zero_el();
      bool any = false;
      for (auto& gamma : ray) {
        auto it = out.a.find(gamma);
        if (it != out.a.end()) {
          ctx.add_lie(x, gamma, it->second);
          any = true;
        }
      }
      if (any) p = ctx.mul(p, ctx.exp(x));
    }
    auto diff = log_m - ctx.log(p);
    for (auto& [gamma, hh] : ctx.hgt) {
      if (hh != h) continue;
      auto c = ctx.component(diff, gamma);
      if (!(c == ctx.component(ctx.zero_el(), gamma))) out.a[gamma] = c;
    }
  }

  // the defining equation must close at the truncation height
  auto p = ctx.one();
  for (auto& ray : new_rays) {
    auto x = ctx.zero_el();
    bool any = false;
    for (auto& gamma : ray) {
      auto it = out.a.find(gamma);
      if (it != out.a.end()) {
        ctx.add_lie(x, gamma, it->second);
        any = true;
      }
    }
    if (any) p = ctx.mul(p, ctx.exp(x));
  }
  if (!(p == m)) throw std::runtime_error("wall-cross solve failed to close");
  return out;
}

// ---- spectrum extraction -----------------------------------------------------

// log of one quantum-dilogarithm factor on a primitive class, n-th multiple
inline LaurentFraction dilog_unit(int n) {
  LaurentScalar d = LaurentScalar::half_power(n) - LaurentScalar::half_power(-n);
  return LaurentFraction(LaurentScalar(1), d) * LaurentFraction(Rational(1, n));
}

struct DTRay {
  GaussianRational dir;
  std::map<IntVec, LaurentFraction> a;
};

struct DTSpectrum {
  std::vector<DTRay> rays;  // clockwise
  std::optional<std::map<IntVec, long long>> omega;
};

namespace detail {
inline IntVec primitive_direction(const IntVec& v, long long& mult) {
  long long g = 0;
  for (auto x : v) g = std::gcd(g, std::llabs(x));
  mult = g;
  IntVec p(v.size());
  for (size_t i = 0; i < v.size(); ++i) p[i] = v[i] / g;
  return p;
}
}  // namespace detail

// Moebius-type inversion along one ray: a(m g0) = sum over divisors k of m of
// Omega(k g0) * dilog_unit(m/k), solved upward in m.
inline std::optional<std::map<IntVec, long long>> ray_omega(const DTRay& ray) {
  std::map<long long, LaurentFraction> by_mult;
  IntVec prim;
  for (auto& [gamma, c] : ray.a) {
    long long m;
    IntVec p = detail::primitive_direction(gamma, m);
    if (prim.empty()) prim = p;
    if (p != prim) return std::nullopt;  // mixed directions on a merged ray
    by_mult[m] = c;
  }
  if (by_mult.empty()) return std::map<IntVec, long long>{};
  long long maxm = by_mult.rbegin()->first;
  std::map<long long, long long> om;
  for (long long m = 1; m <= maxm; ++m) {
    LaurentFraction acc = by_mult.count(m) ? by_mult[m] : LaurentFraction(0);
    for (long long k = 1; k < m; ++k)
      if (m % k == 0 && om.count(k) && om[k])
        acc = acc - LaurentFraction(Rational(om[k])) * dilog_unit((int)(m / k));
    LaurentFraction w = acc / dilog_unit(1);
    long long val;
    if (!w.is_integer_constant(val)) return std::nullopt;
    if (val) om[m] = val;
  }
  std::map<IntVec, long long> out;
  for (auto& [m, val] : om) {
    IntVec g(prim.size());
    for (size_t i = 0; i < prim.size(); ++i) g[i] = prim[i] * m;
    out[g] = val;
  }
  return out;
}

inline DTSpectrum extract_spectrum(const StabilityData& d, const Sector& v) {
  DTSpectrum sp;
  TorusCtx phantom;  // ray grouping only consults commute() on collisions
  phantom.rank = d.charge.rank;
  phantom.pairing = IntMat(d.charge.rank, IntVec(d.charge.rank, 0));
  std::vector<IntVec> supp;
  for (auto& [gamma, c] : d.a) {
    if (c.is_zero()) continue;
    GaussianRational zv = d.charge.eval(gamma);
    if (zv.is_zero()) continue;
    bool in = d.charge.floating ? v.contains_f(zv, d.charge.tol) : v.contains(zv);
    if (in) supp.push_back(gamma);
  }
  auto rays = clockwise_rays(d.charge, supp, phantom);
  bool all_ok = true;
  std::map<IntVec, long long> omega;
  for (auto& ray : rays) {
    DTRay r;
    r.dir = d.charge.eval(ray.front());
    for (auto& gamma : ray) r.a[gamma] = d.a.at(gamma);
    if (all_ok) {
      auto om = ray_omega(r);
      if (om)
        omega.insert(om->begin(), om->end());
      else
        all_ok = false;
    }
    sp.rays.push_back(std::move(r));
  }
  if (all_ok) sp.omega = omega;
  return sp;
}

}  // namespace wallx
