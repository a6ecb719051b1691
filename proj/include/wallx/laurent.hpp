#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/rational_adaptor.hpp>

#include "wallx/rational.hpp"

namespace wallx {

// exact coefficient arithmetic: q-series denominators blow through any fixed
// word size, so the Laurent layer runs on arbitrary precision
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigRat bigrat_pow(const BigRat& b, int e) {
  if (e < 0) {
    if (b == 0) throw std::domain_error("zero to a negative power");
    return bigrat_pow(BigRat(denominator(b), numerator(b)), -e);
  }
  BigRat r = 1, x = b;
  for (int k = e; k; k >>= 1) {
    if (k & 1) r *= x;
    x *= x;
  }
  return r;
}

struct OddHalfPower : std::domain_error {
  using std::domain_error::domain_error;
};

// Integer Laurent polynomial in L^{1/2}; exponent keys are doubled, so key k
// stands for L^{k/2}.  No zero coefficients are stored.
struct LaurentScalar {
  std::map<int, BigInt> c;

  LaurentScalar() = default;
  LaurentScalar(long long constant) {
    if (constant) c[0] = constant;
  }
  LaurentScalar(const BigInt& constant) {
    if (constant != 0) c[0] = constant;
  }

  // L^{k/2}
  static LaurentScalar half_power(int k, long long coeff = 1) {
    LaurentScalar s;
    if (coeff) s.c[k] = coeff;
    return s;
  }
  // L^k
  static LaurentScalar power(int k, long long coeff = 1) { return half_power(2 * k, coeff); }
  static LaurentScalar L() { return power(1); }

  bool is_zero() const { return c.empty(); }

  void set(int k, const BigInt& v) {
    if (v == 0) c.erase(k); else c[k] = v;
  }
  BigInt coeff(int k) const {
    auto it = c.find(k);
    return it == c.end() ? BigInt(0) : it->second;
  }

  friend LaurentScalar operator+(const LaurentScalar& a, const LaurentScalar& b) {
    LaurentScalar r = a;
    for (auto& [k, v] : b.c) r.set(k, r.coeff(k) + v);
    return r;
  }
  friend LaurentScalar operator-(const LaurentScalar& a, const LaurentScalar& b) {
    LaurentScalar r = a;
    for (auto& [k, v] : b.c) r.set(k, r.coeff(k) - v);
    return r;
  }
  LaurentScalar operator-() const {
    LaurentScalar r;
    for (auto& [k, v] : c) r.c[k] = -v;
    return r;
  }
  friend LaurentScalar operator*(const LaurentScalar& a, const LaurentScalar& b) {
    LaurentScalar r;
    for (auto& [ka, va] : a.c)
      for (auto& [kb, vb] : b.c) r.set(ka + kb, r.coeff(ka + kb) + va * vb);
    return r;
  }
  LaurentScalar& operator+=(const LaurentScalar& o) { return *this = *this + o; }
  LaurentScalar& operator-=(const LaurentScalar& o) { return *this = *this - o; }
  LaurentScalar& operator*=(const LaurentScalar& o) { return *this = *this * o; }

  friend bool operator==(const LaurentScalar& a, const LaurentScalar& b) { return a.c == b.c; }
  friend bool operator!=(const LaurentScalar& a, const LaurentScalar& b) { return !(a == b); }
  bool operator<(const LaurentScalar& o) const { return c < o.c; }

  // exact evaluation at L = q.  Odd half powers require q to be a perfect
  // square (precondition surfaced as OddHalfPower).
  BigRat specialize(long long q) const {
    if (q < 1) throw std::domain_error("specialize needs q >= 1");
    bool odd = false;
    for (auto& [k, v] : c)
      if (k % 2 != 0) odd = true;
    long long root = 0;
    if (odd) {
      long long s = 0;
      while (s * s < q) ++s;
      if (s * s != q) throw OddHalfPower("odd half power of L needs square q");
      root = s;
    }
    BigRat acc = 0;
    for (auto& [k, v] : c) {
      BigRat term(v);
      if (k % 2 == 0) term *= bigrat_pow(BigRat(q), k / 2);
      else term *= bigrat_pow(BigRat(root), k);
      acc += term;
    }
    return acc;
  }

  std::string str() const {
    if (c.empty()) return "0";
    std::string s;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      auto& [k, v] = *it;
      if (!s.empty()) s += v >= 0 ? " + " : " - ";
      else if (v < 0) s += "-";
      BigInt av = v < 0 ? BigInt(-v) : v;
      std::string mono;
      if (k == 0) mono = av.str();
      else {
        if (av != 1) mono = av.str() + "*";
        mono += "L";
        if (k != 2) {
          mono += "^";
          if (k % 2 == 0) mono += std::to_string(k / 2);
          else mono += "(" + std::to_string(k) + "/2)";
        }
      }
      s += mono;
    }
    return s;
  }
  friend std::ostream& operator<<(std::ostream& os, const LaurentScalar& x) { return os << x.str(); }
};

namespace detail {

// dense integer polynomial helpers for fraction reduction (variable t = L^{1/2});
// everything stays over Z with explicit content bookkeeping, because a rational
// Euclid blows up its intermediate coefficients beyond use
using IPoly = std::vector<BigInt>;

inline IPoly to_ipoly(const LaurentScalar& x, int& shift) {
  // x = t^shift * poly with nonzero constant term
  shift = x.c.begin()->first;
  int deg = x.c.rbegin()->first - shift;
  IPoly p(deg + 1, BigInt(0));
  for (auto& [k, v] : x.c) p[k - shift] = v;
  return p;
}

inline void ipoly_trim(IPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// strips the (positive) content, returns it; zero polynomial has content 0
inline BigInt ipoly_primitive(IPoly& p) {
  BigInt g = 0;
  for (auto& x : p) g = gcd(g, x);
  if (g == 0) return 0;
  for (auto& x : p) x /= g;
  return g;
}

// pseudo-remainder flavour: scales the dividend by the divisor lead each step,
// so the result equals rem(a, b) up to a nonzero integer factor
inline IPoly ipoly_prem(IPoly a, const IPoly& b) {
  const BigInt& lb = b.back();
  while (a.size() >= b.size() && !a.empty()) {
    BigInt f = a.back();
    size_t off = a.size() - b.size();
    for (auto& x : a) x *= lb;
    for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    ipoly_trim(a);
  }
  return a;
}

// primitive PRS gcd; result is primitive with positive leading coefficient
inline IPoly ipoly_gcd(IPoly a, IPoly b) {
  ipoly_trim(a);
  ipoly_trim(b);
  ipoly_primitive(a);
  ipoly_primitive(b);
  if (a.size() < b.size()) a.swap(b);
  while (!b.empty()) {
    if (b.size() == 1) return {BigInt(1)};  // nonzero constant: coprime
    IPoly r = ipoly_prem(a, b);
    ipoly_primitive(r);
    a.swap(b);
    b.swap(r);
  }
  if (!a.empty() && a.back() < 0)
    for (auto& x : a) x = -x;
  return a;
}

inline IPoly ipoly_div_exact(IPoly a, const IPoly& b) {
  IPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, BigInt(0));
  while (a.size() >= b.size() && !a.empty()) {
    BigInt f = a.back() / b.back();
    if (f * b.back() != a.back()) throw std::logic_error("ipoly_div_exact: not divisible");
    size_t off = a.size() - b.size();
    q[off] = f;
    for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    ipoly_trim(a);
  }
  if (!a.empty()) throw std::logic_error("ipoly_div_exact: nonzero remainder");
  return q;
}

inline LaurentScalar from_ipoly(const IPoly& p, int shift) {
  LaurentScalar out;
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] != 0) out.c[(int)i + shift] = p[i];
  return out;
}

// gcd of two nonzero scalars up to units t^k, anchored at shift 0
inline LaurentScalar ls_gcd(const LaurentScalar& a, const LaurentScalar& b) {
  int sa, sb;
  auto pa = to_ipoly(a, sa);
  auto pb = to_ipoly(b, sb);
  return from_ipoly(ipoly_gcd(std::move(pa), std::move(pb)), 0);
}

inline LaurentScalar ls_div_exact(const LaurentScalar& a, const LaurentScalar& b) {
  int sa, sb;
  auto pa = to_ipoly(a, sa);
  auto pb = to_ipoly(b, sb);
  return from_ipoly(ipoly_div_exact(std::move(pa), pb), sa - sb);
}

}  // namespace detail

// Fraction num/den over the Laurent ring, reduced: num and den are coprime
// primitive integer polynomials (num may carry a unit L^{k/2} shift), den has
// nonzero constant term and positive leading coefficient, the sign and all
// rational content live in the scale.
struct LaurentFraction {
  BigRat scale;
  LaurentScalar num;   // primitive integer, may carry L^{k/2} unit shift
  LaurentScalar den;   // primitive integer, constant term nonzero, positive lead

  LaurentFraction() : scale(0), num(0), den(1) {}
  LaurentFraction(long long n) : scale(n), num(1), den(1) { if (n == 0) { scale = 0; num = LaurentScalar(); } }
  LaurentFraction(const Rational& r) : scale(BigRat(r.num, r.den)), num(1), den(1) { if (r.is_zero()) num = LaurentScalar(); }
  LaurentFraction(const BigRat& r) : scale(r), num(1), den(1) { if (r == 0) num = LaurentScalar(); }
  LaurentFraction(const LaurentScalar& n) : scale(1), num(n), den(1) { reduce(); }
  LaurentFraction(const LaurentScalar& n, const LaurentScalar& d) : scale(1), num(n), den(d) { reduce(); }

  bool is_zero() const { return num.is_zero() || scale == 0; }

  void reduce() { canonicalize(true); }

 private:
  // run_gcd = false is valid only when num and den are already coprime
  void canonicalize(bool run_gcd) {
    if (den.is_zero()) throw std::domain_error("laurent fraction with zero denominator");
    if (num.is_zero() || scale == 0) { scale = 0; num = LaurentScalar(); den = LaurentScalar(1); return; }
    int sn, sd;
    auto pn = detail::to_ipoly(num, sn);
    auto pd = detail::to_ipoly(den, sd);
    BigInt cn = detail::ipoly_primitive(pn);
    BigInt cd = detail::ipoly_primitive(pd);
    if (run_gcd && pn.size() > 1 && pd.size() > 1) {
      auto g = detail::ipoly_gcd(pn, pd);
      if (g.size() > 1) {
        pn = detail::ipoly_div_exact(pn, g);
        pd = detail::ipoly_div_exact(pd, g);
      }
    }
    scale = scale * BigRat(cn, cd);
    // positive leading coefficient on den
    if (pd.back() < 0) {
      for (auto& x : pd) x = -x;
      for (auto& x : pn) x = -x;
    }
    // canonical sign: positive leading coefficient on num, sign lives in scale
    if (pn.back() < 0) {
      for (auto& x : pn) x = -x;
      scale = -scale;
    }
    num = detail::from_ipoly(pn, sn - sd);
    den = detail::from_ipoly(pd, 0);
  }

 public:

  friend LaurentFraction operator+(const LaurentFraction& a, const LaurentFraction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // lcm of the denominators, so degree growth over long sums stays additive
    LaurentScalar one(1);
    LaurentScalar g = (a.den == one || b.den == one) ? one : detail::ls_gcd(a.den, b.den);
    LaurentScalar da = g == one ? a.den : detail::ls_div_exact(a.den, g);
    LaurentScalar db = g == one ? b.den : detail::ls_div_exact(b.den, g);
    // fold both scales into the numerators over a common rational denominator
    LaurentFraction r;
    BigInt d = denominator(a.scale) / gcd(denominator(a.scale), denominator(b.scale)) *
               denominator(b.scale);
    LaurentScalar na = a.num * LaurentScalar(BigInt(numerator(a.scale) * (d / denominator(a.scale)))) * db;
    LaurentScalar nb = b.num * LaurentScalar(BigInt(numerator(b.scale) * (d / denominator(b.scale)))) * da;
    r.scale = BigRat(1, d);
    r.num = na + nb;
    r.den = a.den * db;
    r.reduce();
    return r;
  }
  friend LaurentFraction operator-(const LaurentFraction& a, const LaurentFraction& b) { return a + (-b); }
  LaurentFraction operator-() const {
    LaurentFraction r = *this;
    r.scale = -r.scale;
    return r;
  }
  friend LaurentFraction operator*(const LaurentFraction& a, const LaurentFraction& b) {
    if (a.is_zero() || b.is_zero()) return LaurentFraction();
    // cross-cancel; the remaining num and den are coprime by construction
    LaurentScalar one(1);
    LaurentScalar g1 = (a.num == one || b.den == one) ? one : detail::ls_gcd(a.num, b.den);
    LaurentScalar g2 = (b.num == one || a.den == one) ? one : detail::ls_gcd(b.num, a.den);
    LaurentFraction r;
    r.scale = a.scale * b.scale;
    r.num = (g1 == one ? a.num : detail::ls_div_exact(a.num, g1)) *
            (g2 == one ? b.num : detail::ls_div_exact(b.num, g2));
    r.den = (g2 == one ? a.den : detail::ls_div_exact(a.den, g2)) *
            (g1 == one ? b.den : detail::ls_div_exact(b.den, g1));
    r.canonicalize(false);
    return r;
  }
  friend LaurentFraction operator/(const LaurentFraction& a, const LaurentFraction& b) {
    if (b.is_zero()) throw std::domain_error("laurent fraction division by zero");
    LaurentFraction r;
    r.scale = a.scale / b.scale;
    r.num = a.num * b.den;
    r.den = a.den * b.num;
    r.reduce();
    return r;
  }
  LaurentFraction& operator+=(const LaurentFraction& o) { return *this = *this + o; }
  LaurentFraction& operator-=(const LaurentFraction& o) { return *this = *this - o; }
  LaurentFraction& operator*=(const LaurentFraction& o) { return *this = *this * o; }

  friend bool operator==(const LaurentFraction& a, const LaurentFraction& b) {
    // reduced normal form is canonical
    return a.scale == b.scale && a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const LaurentFraction& a, const LaurentFraction& b) { return !(a == b); }

  // integer constant detection (for DT-invariant extraction)
  bool is_integer_constant(long long& out) const {
    if (is_zero()) { out = 0; return true; }
    if (den != LaurentScalar(1) || num != LaurentScalar(1)) return false;
    if (denominator(scale) != 1) return false;
    BigInt n = numerator(scale);
    if (n > std::numeric_limits<long long>::max() || n < std::numeric_limits<long long>::min())
      return false;
    out = n.convert_to<long long>();
    return true;
  }

  BigRat specialize(long long q) const {
    BigRat d = den.specialize(q);
    if (d == 0) throw std::domain_error("denominator vanishes at q");
    return scale * num.specialize(q) / d;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    if (scale != 1) s += "(" + scale.str() + ")*";
    s += "(" + num.str() + ")";
    if (den != LaurentScalar(1)) s += "/(" + den.str() + ")";
    return s;
  }
  friend std::ostream& operator<<(std::ostream& os, const LaurentFraction& x) { return os << x.str(); }
};

}  // namespace wallx
