#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace wallx {

// Exact rational on int64 with __int128 intermediates; throws on overflow
// instead of wrapping.
struct Rational {
  long long num = 0;
  long long den = 1;  // > 0 always

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  static long long checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
    return static_cast<long long>(v);
  }

  void normalize() {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
    __int128 d = (__int128)a.den * b.den;
    return fromWide(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    __int128 n = (__int128)a.num * b.den - (__int128)b.num * a.den;
    __int128 d = (__int128)a.den * b.den;
    return fromWide(n, d);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return fromWide((__int128)a.num * b.num, (__int128)a.den * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::domain_error("rational division by zero");
    return fromWide((__int128)a.num * b.den, (__int128)a.den * b.num);
  }
  Rational operator-() const { Rational r; r.num = -num; r.den = den; return r; }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  bool is_zero() const { return num == 0; }
  bool is_integer() const { return den == 1; }
  int sign() const { return num > 0 ? 1 : num < 0 ? -1 : 0; }

  Rational abs() const { return num < 0 ? -*this : *this; }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  double to_double() const { return (double)num / (double)den; }

 private:
  // reduce in wide arithmetic before narrowing, so e.g. (a/b)*(b/a) never trips
  // the guard on intermediates that cancel.
  static Rational fromWide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 an = n < 0 ? -n : n;
    __int128 g = wideGcd(an, d);
    if (g > 1) { n /= g; d /= g; }
    Rational r;
    r.num = checked(n);
    r.den = checked(d);
    if (r.num == 0) r.den = 1;
    return r;
  }
  static __int128 wideGcd(__int128 a, __int128 b) {
    while (b) { __int128 t = a % b; a = b; b = t; }
    return a;
  }
};

inline Rational rational_pow(Rational base, long long e) {
  if (e < 0) { base = Rational(1) / base; e = -e; }
  Rational acc(1);
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

// Exact element of Q(i); enough for central charges on lattice generators.
struct GaussianRational {
  Rational re, im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(r) {}
  GaussianRational(Rational r, Rational i) : re(r), im(i) {}
  GaussianRational(long long r, long long i) : re(r), im(i) {}

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  Rational norm2() const { return re * re + im * im; }

  std::string str() const { return "(" + re.str() + ", " + im.str() + ")"; }
};

// cross(a,b) > 0 iff b is counterclockwise from a (as plane vectors).
inline Rational cross(const GaussianRational& a, const GaussianRational& b) {
  return a.re * b.im - a.im * b.re;
}
inline Rational dot(const GaussianRational& a, const GaussianRational& b) {
  return a.re * b.re + a.im * b.im;
}

// half(z): 0 for arg in (-pi/2, pi/2] side split — we order arguments over
// (-pi, pi] by: upper half-plane (im>0, or im==0 && re>0) first.
// arg_less(a,b): arg(a) < arg(b), both nonzero, principal value in (-pi, pi].
inline bool arg_less(const GaussianRational& a, const GaussianRational& b) {
  if (a.is_zero() || b.is_zero()) throw std::domain_error("arg of zero");
  auto cls = [](const GaussianRational& z) {
    // ordered classes of (-pi, pi]: 3=negative im, 0=positive real axis,
    // 1=upper half, 2=negative real axis; class of arg ascending: 3 < 0 < 1 < 2
    if (z.im.sign() < 0) return 0;            // (-pi, 0)
    if (z.im.sign() == 0) return z.re.sign() > 0 ? 1 : 3;  // 0 or pi
    return 2;                                 // (0, pi)
  };
  int ca = cls(a), cb = cls(b);
  if (ca != cb) return ca < cb;
  if (ca == 1 || ca == 3) return false;  // equal axis args
  // same open half-plane: arg(a) < arg(b) iff cross(a,b) > 0
  return cross(a, b).sign() > 0;
}

inline bool arg_equal(const GaussianRational& a, const GaussianRational& b) {
  if (a.is_zero() || b.is_zero()) throw std::domain_error("arg of zero");
  return cross(a, b).sign() == 0 && dot(a, b).sign() > 0;
}

}  // namespace wallx
