#pragma once

// A_n V-collections over the induced groupoid, the A_2 stability atlas
// (coamoeba membership, case classification, HN oracle), and interval Hall
// matrices with the concatenation product.  Phases are measured in units of
// pi throughout; the shift functor adds exactly 1.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wallx/groupoid.hpp"
#include "wallx/quiver.hpp"
#include "wallx/rational.hpp"

namespace wallx {

struct DegenerateF : std::domain_error {
  explicit DegenerateF(const std::string& m) : std::domain_error(m) {}
};
struct BoundaryAmbiguity : std::domain_error {
  explicit BoundaryAmbiguity(const std::string& m) : std::domain_error(m) {}
};
struct EndpointPhase : std::domain_error {
  explicit EndpointPhase(const std::string& m) : std::domain_error(m) {}
};
struct ExactnessUnavailable : std::domain_error {
  explicit ExactnessUnavailable(const std::string& m) : std::domain_error(m) {}
};

// ---- V-collection for the A_n chain -----------------------------------------

inline bool shift_odd(const Indec& m) { return ((m.shift % 2) + 2) % 2 == 1; }

// endpoints of the walk edge carried by m: even shifts run min -> max
inline std::pair<int, int> cell_endpoints(const Indec& m) {
  if (shift_odd(m)) return {m.j, m.i};
  return {m.i, m.j};
}

// Cell (i,j), i != j, holds M_{min,max}[s] with s even iff i < j; the opposite
// cell is the shift of this one.  Diagonal cells carry only classes of trivial
// K_0 image, so for narrow phase windows they contribute the unit alone.
struct VCollection {
  int n = 0;
  InducedGroupoid groupoid;

  std::pair<int, int> cell_of(const Indec& m) const { return cell_endpoints(m); }

  bool cell_contains(int i, int j, const Indec& m) const {
    if (i == j || i < 0 || j < 0 || i > n || j > n) return false;
    return m.i == std::min(i, j) && m.j == std::max(i, j) && (shift_odd(m) == (i > j));
  }

  // class map to Z^{n+1}; odd shifts negate
  IntVec epsilon(const Indec& m) const {
    IntVec v = phi_of(m, n);
    if (shift_odd(m))
      for (auto& c : v) c = -c;
    return v;
  }

  // representatives of cell (i,j) with shifts in [lo_shift, hi_shift]
  std::vector<Indec> cell_reps(int i, int j, int lo_shift, int hi_shift) const {
    std::vector<Indec> out;
    if (i == j) return out;
    Indec base(std::min(i, j), std::max(i, j), 0);
    for (int s = lo_shift; s <= hi_shift; ++s)
      if (cell_contains(i, j, base.shifted(s))) out.push_back(base.shifted(s));
    return out;
  }
};

inline VCollection build_an_collection(int n) {
  if (n < 1) throw std::invalid_argument("collection needs at least one arrow");
  return VCollection{n, an_groupoid(n)};
}

// ---- A_2 stability coordinates ----------------------------------------------

// Phase triple in pi units.  alpha3 == alpha1 + alpha2 by construction.
struct A2Point {
  Rational theta01, theta12, theta02;

  Rational alpha1() const { return theta02 - theta01; }
  Rational alpha2() const { return theta12 - theta02; }
  Rational alpha3() const { return theta12 - theta01; }

  friend bool operator==(const A2Point& a, const A2Point& b) {
    return a.theta01 == b.theta01 && a.theta12 == b.theta12 && a.theta02 == b.theta02;
  }
};

// anchor theta01 = 0; handy for region probes where only alphas matter
inline A2Point a2_from_alphas(const Rational& a1, const Rational& a2) {
  return A2Point{Rational(0), a1 + a2, a1};
}

inline long long rat_floor(const Rational& r) {
  if (r.num >= 0) return r.num / r.den;
  return -((-r.num + r.den - 1) / r.den);
}

// ---- central charge from a vertex potential ----------------------------------

// exact principal argument in pi units, defined only on the quarter-pi grid
inline Rational grid_arg(const GaussianRational& z) {
  const Rational zero(0);
  bool re0 = z.re == zero, im0 = z.im == zero;
  if (re0 && im0) throw DegenerateF("zero charge has no argument");
  if (im0) return z.re > zero ? Rational(0) : Rational(1);
  if (re0) return z.im > zero ? Rational(1, 2) : Rational(-1, 2);
  if (z.re == z.im) return z.re > zero ? Rational(1, 4) : Rational(-3, 4);
  if (z.re == -z.im) return z.re > zero ? Rational(-1, 4) : Rational(3, 4);
  throw ExactnessUnavailable("argument off the exact quarter-pi grid: " + z.str());
}

struct A2Charge {
  std::vector<GaussianRational> f;                   // vertex values
  std::map<std::pair<int, int>, GaussianRational> z; // Z(u_ij) = f_j - f_i, i < j
  std::map<std::pair<int, int>, Rational> theta;     // lifted phases, pi units
  std::optional<A2Point> point;                      // populated when n == 2
};

// arg_lifts[(i,j)] = k shifts theta_ij by 2k; untouched pairs use the
// principal value in (-1, 1]
inline A2Charge charge_from_f(const std::vector<GaussianRational>& f,
                              const std::map<std::pair<int, int>, long long>& arg_lifts = {}) {
  if (f.size() < 2) throw std::invalid_argument("need at least two vertex values");
  A2Charge out;
  out.f = f;
  int n = (int)f.size() - 1;
  for (int i = 0; i < n + 1; ++i)
    for (int j = i + 1; j < n + 1; ++j) {
      GaussianRational zij = f[j] - f[i];
      if (zij == GaussianRational())
        throw DegenerateF("coincident vertex values at " + std::to_string(i) + "," +
                          std::to_string(j));
      out.z[{i, j}] = zij;
      Rational th = grid_arg(zij);
      auto it = arg_lifts.find({i, j});
      if (it != arg_lifts.end()) th += Rational(2 * it->second);
      out.theta[{i, j}] = th;
    }
  if (n == 2)
    out.point = A2Point{out.theta[{0, 1}], out.theta[{1, 2}], out.theta[{0, 2}]};
  return out;
}

// ---- coamoeba membership ------------------------------------------------------

// The realizable locus in the (alpha1, alpha2) plane: open triangles
// T+ = {a1 > 0, a2 > 0, a1 + a2 < 1} and T- = -T+, translated by 2Z^2.
struct CoamoebaVerdict {
  bool member = false;
  int a = 0, b = 0;  // translate (2a, 2b)
  int sign = 0;      // +1 upper triangle, -1 lower
};

inline CoamoebaVerdict coamoeba_member(const A2Point& p) {
  Rational a1 = p.alpha1(), a2 = p.alpha2();
  long long fa = rat_floor(a1 / Rational(2)), fb = rat_floor(a2 / Rational(2));
  Rational r1 = a1 - Rational(2 * fa), r2 = a2 - Rational(2 * fb);  // in [0, 2)
  const Rational one(1), three(3);
  if (r1 > Rational(0) && r1 < one && r2 > Rational(0) && r2 < one && r1 + r2 < one)
    return {true, (int)fa, (int)fb, +1};
  if (r1 > one && r2 > one && r1 + r2 > three)
    return {true, (int)fa + 1, (int)fb + 1, -1};
  return {};
}

// ---- case classification -------------------------------------------------------

enum class StabCase { All, I, II, III };

inline const char* stab_case_name(StabCase c) {
  switch (c) {
    case StabCase::All: return "ALL";
    case StabCase::I: return "I";
    case StabCase::II: return "II";
    case StabCase::III: return "III";
  }
  return "?";
}

// semistable flags ordered M01, M12, M02
inline std::array<bool, 3> semistable_for_case(StabCase c) {
  switch (c) {
    case StabCase::All: return {true, true, true};
    case StabCase::I: return {true, false, true};    // drops M12
    case StabCase::II: return {false, true, true};   // drops M01
    case StabCase::III: return {true, true, false};  // drops M02
  }
  return {true, true, true};
}

struct A2Slicing {
  A2Point pt;
  std::array<bool, 3> ss{true, true, true};  // M01, M12, M02
};

inline A2Slicing slicing_for_case(const A2Point& p, StabCase c) {
  return A2Slicing{p, semistable_for_case(c)};
}

inline int base_index(const Indec& m) {
  if (m.i == 0 && m.j == 1) return 0;
  if (m.i == 1 && m.j == 2) return 1;
  if (m.i == 0 && m.j == 2) return 2;
  throw std::invalid_argument("not an A_2 root: " + m.str());
}

inline Rational phase_of(const A2Point& p, const Indec& m) {
  switch (base_index(m)) {
    case 0: return p.theta01 + Rational(m.shift);
    case 1: return p.theta12 + Rational(m.shift);
    default: return p.theta02 + Rational(m.shift);
  }
}

// ---- HN structure on A_2 --------------------------------------------------------

// Filtration data: vertex walk realized by the factors, and the factors
// themselves in strictly descending phase order.
struct HNResult {
  std::vector<int> path;
  std::vector<std::pair<Indec, Rational>> factors;
};

// The unique candidate HN sequence of M[s] in the given slicing, or nullopt.
// A semistable base is its own filtration; an excluded base breaks along the
// triangle, rotated by the shift.
inline std::optional<HNResult> a2_hn(const A2Slicing& s, const Indec& m) {
  const A2Point& p = s.pt;
  int b = base_index(m);
  if (s.ss[b]) {
    auto [src, tgt] = cell_endpoints(m);
    return HNResult{{src, tgt}, {{m, phase_of(p, m)}}};
  }
  int sh = m.shift;
  bool even = !shift_odd(m);
  switch (b) {
    case 2: {  // M02 -> (M01, M12), needs theta01 > theta12
      if (!(p.alpha3() < Rational(0))) return std::nullopt;
      if (!s.ss[0] || !s.ss[1]) return std::nullopt;
      Indec f1(0, 1, sh), f2(1, 2, sh);
      std::vector<int> path = even ? std::vector<int>{0, 1, 2} : std::vector<int>{2, 1, 0};
      return HNResult{path, {{f1, phase_of(p, f1)}, {f2, phase_of(p, f2)}}};
    }
    case 1: {  // M12 -> (M02, M01[1]), needs alpha1 > 1
      if (!(p.alpha1() > Rational(1))) return std::nullopt;
      if (!s.ss[2] || !s.ss[0]) return std::nullopt;
      Indec f1(0, 2, sh), f2(0, 1, sh + 1);
      std::vector<int> path = even ? std::vector<int>{1, 0, 2} : std::vector<int>{2, 0, 1};
      return HNResult{path, {{f1, phase_of(p, f1)}, {f2, phase_of(p, f2)}}};
    }
    default: {  // M01 -> (M12[-1], M02), needs alpha2 > 1
      if (!(p.alpha2() > Rational(1))) return std::nullopt;
      if (!s.ss[1] || !s.ss[2]) return std::nullopt;
      Indec f1(1, 2, sh - 1), f2(0, 2, sh);
      std::vector<int> path = even ? std::vector<int>{0, 2, 1} : std::vector<int>{1, 2, 0};
      return HNResult{path, {{f1, phase_of(p, f1)}, {f2, phase_of(p, f2)}}};
    }
  }
}

// ---- HN oracle -------------------------------------------------------------------

struct OracleReport {
  bool pass = true;
  std::string witness;            // first failure, empty on pass
  std::map<Indec, HNResult> hn;   // filtration found for every probed object
};

// Audits a proposed semistable assignment at p: (a) no degree-0 maps downward
// in phase among declared semistables over the shift window, (b) every
// excluded rotation acquires a filtration with strictly descending phases,
// (c) the filtration is unique per object.
inline OracleReport a2_hn_oracle(const A2Point& p, const std::array<bool, 3>& ss,
                                 const std::vector<int>& window = {-1, 0, 1, 2}) {
  OracleReport rep;
  A2Slicing sl{p, ss};
  const std::array<Indec, 3> bases{Indec(0, 1, 0), Indec(1, 2, 0), Indec(0, 2, 0)};
  auto fail = [&](const std::string& w) {
    rep.pass = false;
    if (rep.witness.empty()) rep.witness = w;
  };

  for (int b1 = 0; b1 < 3; ++b1) {
    if (!ss[b1]) continue;
    for (int b2 = 0; b2 < 3; ++b2) {
      if (!ss[b2]) continue;
      for (int s1 : window)
        for (int s2 : window) {
          Indec m1 = bases[b1].shifted(s1), m2 = bases[b2].shifted(s2);
          if (!(phase_of(p, m1) > phase_of(p, m2))) continue;
          if (hom_dim(m1, m2, 0) > 0)
            fail("degree-0 map " + m1.str() + " -> " + m2.str() + " against phase order");
        }
    }
  }

  for (int b = 0; b < 3; ++b)
    for (int s : window) {
      Indec m = bases[b].shifted(s);
      auto hn = a2_hn(sl, m);
      if (!hn) {
        fail("no filtration for " + m.str());
        continue;
      }
      for (size_t k = 1; k < hn->factors.size(); ++k)
        if (!(hn->factors[k - 1].second > hn->factors[k].second))
          fail("phases not strictly descending for " + m.str());
      // uniqueness: a semistable base must not also break
      if (ss[b] && hn->factors.size() == 1) {
        A2Slicing broken = sl;
        broken.ss[b] = false;
        if (a2_hn(broken, m)) fail("ambiguous filtration for " + m.str());
      }
      rep.hn[m] = *hn;
    }
  return rep;
}

// Case set at p from the wall inequalities, each member independently
// confirmed by the oracle.  Throws on the dividing lines.  Points outside
// every case (unrealizable charges) yield the empty set.
inline std::set<StabCase> a2_classify(const A2Point& p) {
  Rational a1 = p.alpha1(), a2 = p.alpha2(), a3 = p.alpha3();
  for (const Rational& a : {a1, a2, a3})
    if (a.den == 1)
      throw BoundaryAmbiguity("stability point on a dividing line: alpha = " + a.str());
  std::set<StabCase> out;
  if (a1 > Rational(0) && a2 > Rational(0) && a3 < Rational(1)) out.insert(StabCase::All);
  if (a1 > Rational(1)) out.insert(StabCase::I);
  if (a2 > Rational(1)) out.insert(StabCase::II);
  if (a3 < Rational(0)) out.insert(StabCase::III);
  for (StabCase c : out) {
    OracleReport r = a2_hn_oracle(p, semistable_for_case(c));
    if (!r.pass)
      throw std::logic_error(std::string("classification rejected by oracle for case ") +
                             stab_case_name(c) + ": " + r.witness);
  }
  return out;
}

// ---- interval Hall matrices -------------------------------------------------------

// One HN stratum: a factor set in descending phase order, the walk endpoints
// it can realize, and its exact Hall weight.
struct IntervalPiece {
  std::vector<std::pair<Indec, Rational>> factors;
  std::set<std::pair<int, int>> states;
  HallDist dist;
};

struct IntervalElement {
  Rational lo, hi;  // half-open [lo, hi)
  long long q = 0;  // 0 marks the restricted symbolic mode
  std::array<std::array<HallDist, 3>, 3> ent{};
  std::array<std::array<HallElement, 3>, 3> sym{};
  std::vector<IntervalPiece> pieces;
};

namespace vdetail {

// walk endpoints reachable by attaching edges in the given order at either
// end of the growing walk; empty set means no filtration exists
inline std::set<std::pair<int, int>> assemble(const std::vector<std::pair<Indec, Rational>>& fs) {
  std::set<std::pair<int, int>> states;
  if (fs.empty()) return {{0, 0}, {1, 1}, {2, 2}};
  auto [s0, t0] = cell_endpoints(fs[0].first);
  states.insert({s0, t0});
  for (size_t k = 1; k < fs.size(); ++k) {
    auto [es, et] = cell_endpoints(fs[k].first);
    std::set<std::pair<int, int>> next;
    for (auto [s, t] : states) {
      if (et == s) next.insert({es, t});
      if (es == t) next.insert({s, et});
    }
    states = std::move(next);
    if (states.empty()) break;
  }
  return states;
}

inline bool within_cutoff(const std::vector<std::pair<Indec, Rational>>& fs,
                          const std::vector<int>& cutoff) {
  ObjClass cls;
  for (const auto& [m, th] : fs) cls[m] += 1;
  std::vector<int> d = class_dims(cls, 2);
  for (size_t t = 0; t < d.size() && t < cutoff.size(); ++t)
    if (d[t] > cutoff[t]) return false;
  return true;
}

// iterated Hall product over the factors in descending phase order, higher
// part as the sub term, one 1/(q-1) per factor
inline HallDist stratum_weight(long long q, const std::vector<std::pair<Indec, Rational>>& fs) {
  HallDist acc{{ObjClass{}, BigRat(1)}};
  for (const auto& [m, th] : fs) {
    HallDist f{{ObjClass{{m, 1}}, BigRat(1, BigInt(q) - 1)}};
    acc = hall_pair_mul(q, 2, acc, f);
  }
  return acc;
}

}  // namespace vdetail

// Semistable pool of the slicing inside [lo, hi), descending.  Throws if any
// support phase hits an endpoint or two pool phases coincide.
inline std::vector<std::pair<Indec, Rational>> interval_pool(const A2Slicing& s,
                                                             const Rational& lo,
                                                             const Rational& hi) {
  const std::array<Indec, 3> bases{Indec(0, 1, 0), Indec(1, 2, 0), Indec(0, 2, 0)};
  std::vector<std::pair<Indec, Rational>> pool;
  for (int b = 0; b < 3; ++b) {
    if (!s.ss[b]) continue;
    Rational th = phase_of(s.pt, bases[b]);
    if ((lo - th).den == 1 || (hi - th).den == 1)
      throw EndpointPhase("support ray of " + bases[b].str() + " meets an interval endpoint");
    for (long long k = rat_floor(lo - th); ; ++k) {
      Rational ph = th + Rational(k);
      if (ph < lo) continue;
      if (!(ph < hi)) break;
      pool.push_back({bases[b].shifted((int)k), ph});
    }
  }
  std::sort(pool.begin(), pool.end(),
            [](const auto& a, const auto& b) { return b.second < a.second; });
  for (size_t k = 1; k < pool.size(); ++k)
    if (pool[k - 1].second == pool[k].second)
      throw BoundaryAmbiguity("coincident support phases in the interval");
  return pool;
}

// All strata of [lo, hi): subsets of the pool that assemble into a walk and
// stay under the componentwise dimension cutoff.  Entry (i,j) collects the
// weights of the strata realizing endpoints (i,j); the empty stratum is the
// unit on the diagonal.
inline IntervalElement interval_element(const A2Slicing& s, const Rational& lo,
                                        const Rational& hi, long long q,
                                        const std::vector<int>& cutoff) {
  if (hi < lo) throw std::invalid_argument("interval endpoints out of order");
  if (q < 2) throw std::invalid_argument("need a prime power q >= 2");
  IntervalElement el;
  el.lo = lo;
  el.hi = hi;
  el.q = q;
  auto pool = interval_pool(s, lo, hi);

  int P = (int)pool.size();
  if (P > 20) throw std::domain_error("interval support too large to enumerate");
  for (unsigned mask = 0; mask < (1u << P); ++mask) {
    std::vector<std::pair<Indec, Rational>> fs;
    for (int k = 0; k < P; ++k)
      if (mask & (1u << k)) fs.push_back(pool[k]);  // pool is descending
    if (!vdetail::within_cutoff(fs, cutoff)) continue;
    auto states = vdetail::assemble(fs);
    if (states.empty()) continue;
    IntervalPiece piece;
    piece.factors = fs;
    piece.states = states;
    piece.dist = fs.empty() ? HallDist{{ObjClass{}, BigRat(1)}} : vdetail::stratum_weight(q, fs);
    for (auto [i, j] : states)
      for (const auto& [cls, w] : piece.dist) hall_dist_add(el.ent[i][j], cls, w);
    el.pieces.push_back(std::move(piece));
  }
  return el;
}

// Restricted mode: off-diagonal entries over the same strata, with
// correspondence-calculus coefficients.  Only same-shift chains compose, so
// multi-factor strata survive exactly when corr_product does not vanish.
inline IntervalElement interval_element_symbolic(const A2Slicing& s, const Rational& lo,
                                                 const Rational& hi) {
  IntervalElement el;
  el.lo = lo;
  el.hi = hi;
  el.q = 0;
  auto pool = interval_pool(s, lo, hi);
  for (const auto& [m, th] : pool) {
    auto [i, j] = cell_endpoints(m);
    el.sym[i][j] = el.sym[i][j] + rho(m);
  }
  // walk-composable chains of length two; corr_product wants root order
  for (const auto& [m1, t1] : pool)
    for (const auto& [m2, t2] : pool) {
      if (m1 == m2) continue;
      auto [a, b] = cell_endpoints(m1);
      auto [c, d] = cell_endpoints(m2);
      if (b != c || a == d) continue;
      HallElement comp = m1.j == m2.i ? corr_product(rho(m1), rho(m2))
                                      : corr_product(rho(m2), rho(m1));
      el.sym[a][d] = el.sym[a][d] + comp;
    }
  return el;
}

// ---- wall-crossing concatenation ---------------------------------------------------

// Product of adjacent interval elements: strata concatenate (high part first,
// as the sub term of the Hall product) and the combined factor set is
// re-assembled into walks.  Matches interval_element on the union interval.
inline std::array<std::array<HallDist, 3>, 3> wcf_concat(const IntervalElement& hi,
                                                         const IntervalElement& lo,
                                                         const std::vector<int>& cutoff) {
  if (hi.q != lo.q || hi.q == 0) throw std::invalid_argument("mismatched interval modes");
  std::array<std::array<HallDist, 3>, 3> out{};
  for (const auto& ph : hi.pieces)
    for (const auto& pl : lo.pieces) {
      std::vector<std::pair<Indec, Rational>> fs = ph.factors;
      fs.insert(fs.end(), pl.factors.begin(), pl.factors.end());
      if (!vdetail::within_cutoff(fs, cutoff)) continue;
      auto states = vdetail::assemble(fs);
      if (states.empty()) continue;
      HallDist w = hall_pair_mul(hi.q, 2, ph.dist, pl.dist);
      for (auto [i, j] : states)
        for (const auto& [cls, c] : w) hall_dist_add(out[i][j], cls, c);
    }
  return out;
}

struct WcfReport {
  bool pass = true;
  std::string detail;
  IntervalElement low, high, total;
  std::array<std::array<HallDist, 3>, 3> product{};
};

// Checks A_[t1,t2) * A_[t2,t3) == A_[t1,t3) entrywise at q.  Windows wider
// than one phase unit would admit strata whose lower part carries no
// filtration of its own; those are out of scope here.
inline WcfReport wcf_verify(const A2Slicing& s, const Rational& t1, const Rational& t2,
                            const Rational& t3, long long q, const std::vector<int>& cutoff) {
  if (!(t1 <= t2) || !(t2 <= t3)) throw std::invalid_argument("phases out of order");
  if (Rational(1) < t3 - t1)
    throw std::domain_error("window wider than one phase unit");
  WcfReport rep;
  rep.low = interval_element(s, t1, t2, q, cutoff);
  rep.high = interval_element(s, t2, t3, q, cutoff);
  rep.total = interval_element(s, t1, t3, q, cutoff);
  rep.product = wcf_concat(rep.high, rep.low, cutoff);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (rep.product[i][j] != rep.total.ent[i][j]) {
        rep.pass = false;
        std::ostringstream os;
        os << "entry (" << i << "," << j << ") differs at split " << t2.str();
        rep.detail = os.str();
        return rep;
      }
  return rep;
}

}  // namespace wallx
