#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "wallx/groupoid.hpp"
#include "wallx/laurent.hpp"

namespace wallx {

struct ContextMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SizeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---- twisted groupoid algebra -------------------------------------------

struct TGAElement {
  const InducedGroupoid* g = nullptr;
  std::map<GroupoidMorphism, LaurentScalar> terms;

  TGAElement() = default;
  explicit TGAElement(const InducedGroupoid* gg) : g(gg) {}

  static TGAElement basis(const InducedGroupoid& gg, const GroupoidMorphism& m,
                          LaurentScalar c = LaurentScalar(1)) {
    TGAElement e(&gg);
    if (!gg.contains(m)) throw std::invalid_argument("morphism not in groupoid");
    if (!c.is_zero()) e.terms[m] = c;
    return e;
  }

  void add_term(const GroupoidMorphism& m, const LaurentScalar& c) {
    auto it = terms.find(m);
    LaurentScalar v = (it == terms.end() ? LaurentScalar() : it->second) + c;
    if (v.is_zero()) { if (it != terms.end()) terms.erase(it); }
    else terms[m] = v;
  }

  bool is_zero() const { return terms.empty(); }

  friend TGAElement operator+(const TGAElement& a, const TGAElement& b) {
    if (a.g && b.g && a.g != b.g) throw ContextMismatch("different groupoids");
    TGAElement r = a;
    if (!r.g) r.g = b.g;
    for (auto& [m, c] : b.terms) r.add_term(m, c);
    return r;
  }
  friend TGAElement operator-(const TGAElement& a, const TGAElement& b) {
    TGAElement nb = b;
    for (auto& [m, c] : nb.terms) c = -c;
    return a + nb;
  }
  friend bool operator==(const TGAElement& a, const TGAElement& b) { return a.terms == b.terms; }
};

inline TGAElement tga_mul(const TGAElement& x, const TGAElement& y, const GradingLattice& gl,
                          const Cocycle& s) {
  if (!x.g || x.g != y.g || gl.g != x.g) throw ContextMismatch("tga_mul context");
  TGAElement r(x.g);
  for (auto& [m1, c1] : x.terms)
    for (auto& [m2, c2] : y.terms) {
      auto m = compose(m1, m2);
      if (!m) continue;
      int sign = s.eval(gl, m1, m2);
      if (sign == 0) continue;
      r.add_term(*m, c1 * c2 * LaurentScalar(sign));
    }
  return r;
}

// [e1, e2] = <F1, F2> ( sigma(g1,g2) e_{g1+g2} + sigma(g2,g1) e_{g2+g1} );
// non-composable concatenations drop (sigma = 0 there).  For the cocycles in
// use sigma is symmetric in its arguments, so this matches the single-prefactor
// form as well.
inline TGAElement lie_bracket(const TGAElement& x, const TGAElement& y, const GradingLattice& gl,
                              const Cocycle& s, const IntMat& pairing) {
  if (!x.g || x.g != y.g || gl.g != x.g) throw ContextMismatch("lie_bracket context");
  TGAElement r(x.g);
  for (auto& [m1, c1] : x.terms)
    for (auto& [m2, c2] : y.terms) {
      IntVec f1 = gl.f_of(m1), f2 = gl.f_of(m2);
      long long p = 0;
      for (size_t i = 0; i < f1.size(); ++i)
        for (size_t j = 0; j < f2.size(); ++j) p += f1[i] * pairing[i][j] * f2[j];
      if (p == 0) continue;
      LaurentScalar c = c1 * c2 * LaurentScalar(p);
      if (auto m12 = compose(m1, m2)) {
        int s12 = s.eval(gl, m1, m2);
        if (s12) r.add_term(*m12, c * LaurentScalar(s12));
      }
      if (auto m21 = compose(m2, m1)) {
        int s21 = s.eval(gl, m2, m1);
        if (s21) r.add_term(*m21, c * LaurentScalar(s21));
      }
    }
  return r;
}

// ---- quantum torus -------------------------------------------------------

// e_a e_b = L^{<a,b>/2} e_{a+b} over an integer lattice with antisymmetric
// pairing.  Scalar must support multiplication by L^{k/2} via traits below.
template <class S>
struct half_power_traits;

template <>
struct half_power_traits<LaurentScalar> {
  static LaurentScalar half_power(int k) { return LaurentScalar::half_power(k); }
};
template <>
struct half_power_traits<LaurentFraction> {
  static LaurentFraction half_power(int k) { return LaurentFraction(LaurentScalar::half_power(k)); }
};

template <class S>
struct QTorusElement {
  int rank = 0;
  std::map<IntVec, S> terms;

  QTorusElement() = default;
  explicit QTorusElement(int r) : rank(r) {}

  static QTorusElement basis(int rank, const IntVec& v, S c = S(1)) {
    if ((int)v.size() != rank) throw ContextMismatch("vector rank");
    QTorusElement e(rank);
    if (!c.is_zero()) e.terms[v] = c;
    return e;
  }

  bool is_zero() const { return terms.empty(); }

  void add_term(const IntVec& v, const S& c) {
    auto it = terms.find(v);
    S s = (it == terms.end() ? S(0) : it->second) + c;
    if (s.is_zero()) { if (it != terms.end()) terms.erase(it); }
    else terms[v] = s;
  }

  friend QTorusElement operator+(const QTorusElement& a, const QTorusElement& b) {
    if (a.rank != b.rank && !a.terms.empty() && !b.terms.empty())
      throw ContextMismatch("qtorus rank");
    QTorusElement r = a.terms.empty() ? QTorusElement(b.rank) : QTorusElement(a.rank);
    r.terms = a.terms;
    for (auto& [v, c] : b.terms) r.add_term(v, c);
    return r;
  }
  friend QTorusElement operator-(const QTorusElement& a, const QTorusElement& b) {
    QTorusElement nb = b;
    for (auto& [v, c] : nb.terms) c = -c;
    return a + nb;
  }
  friend bool operator==(const QTorusElement& a, const QTorusElement& b) { return a.terms == b.terms; }
};

namespace detail {

template <class S>
QTorusElement<S> torus_mul_impl(const QTorusElement<S>& x, const QTorusElement<S>& y,
                                const IntMat& pairing, bool motivic_sign) {
  if (x.rank != y.rank && !x.terms.empty() && !y.terms.empty())
    throw ContextMismatch("qtorus rank");
  int rank = x.terms.empty() ? y.rank : x.rank;
  for (auto& row : pairing)
    if ((int)row.size() != rank || (int)pairing.size() != rank)
      throw ContextMismatch("pairing shape");
  QTorusElement<S> r(rank);
  for (auto& [v1, c1] : x.terms)
    for (auto& [v2, c2] : y.terms) {
      long long p = 0;
      for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) p += v1[i] * pairing[i][j] * v2[j];
      IntVec v(rank);
      for (int i = 0; i < rank; ++i) v[i] = v1[i] + v2[i];
      S tw = half_power_traits<S>::half_power((int)p);
      if (motivic_sign && (p % 2 != 0)) tw = S(0) - tw;
      r.add_term(v, c1 * c2 * tw);
    }
  return r;
}

}  // namespace detail

template <class S>
QTorusElement<S> qtorus_mul(const QTorusElement<S>& x, const QTorusElement<S>& y,
                            const IntMat& pairing) {
  return detail::torus_mul_impl(x, y, pairing, false);
}

// sign-twisted variant e_a e_b = (-L^{1/2})^{<a,b>} e_{a+b}: the square root of
// the Lefschetz motive enters wall-crossing with this sign, and only this
// normalization admits the finite dilogarithm factorizations
template <class S>
QTorusElement<S> motivic_torus_mul(const QTorusElement<S>& x, const QTorusElement<S>& y,
                                   const IntMat& pairing) {
  return detail::torus_mul_impl(x, y, pairing, true);
}

// ---- matrices ------------------------------------------------------------

template <class T>
struct Matrix {
  int size = 0;
  std::vector<std::vector<T>> e;

  Matrix() = default;
  Matrix(int n, const T& zero) : size(n), e(n, std::vector<T>(n, zero)) {}

  static Matrix identity(int n, const T& zero, const T& one) {
    Matrix m(n, zero);
    for (int i = 0; i < n; ++i) m.e[i][i] = one;
    return m;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.size != b.size) throw SizeMismatch("matrix sizes");
    Matrix r = a;
    for (int i = 0; i < a.size; ++i)
      for (int j = 0; j < a.size; ++j) r.e[i][j] = r.e[i][j] + b.e[i][j];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.size != b.size) throw SizeMismatch("matrix sizes");
    Matrix r = a;
    for (int i = 0; i < a.size; ++i)
      for (int j = 0; j < a.size; ++j) r.e[i][j] = r.e[i][j] - b.e[i][j];
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) { return a.size == b.size && a.e == b.e; }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  bool strictly_upper() const {
    for (int i = 0; i < size; ++i)
      for (int j = 0; j <= i; ++j)
        if (!e[i][j].is_zero()) return false;
    return true;
  }
};

template <class T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.size != b.size) throw SizeMismatch("matrix sizes");
  if (a.size == 0) return a;
  Matrix<T> r = a;  // shape only; every entry overwritten
  for (int i = 0; i < a.size; ++i)
    for (int j = 0; j < a.size; ++j) {
      T acc = a.e[i][0] * b.e[0][j];
      for (int k = 1; k < a.size; ++k) acc = acc + a.e[i][k] * b.e[k][j];
      r.e[i][j] = acc;
    }
  return r;
}

}  // namespace wallx
