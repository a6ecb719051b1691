#pragma once

#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wallx/rational.hpp"

namespace wallx {

// Multivariate polynomial over Q with a fixed variable count.  Used as the
// exact symbolic scalar for the 2d matrix identities.
struct MultiPoly {
  int nvars = 0;
  std::map<std::vector<int>, Rational> terms;  // exponent vector -> coefficient

  MultiPoly() = default;
  explicit MultiPoly(int nv) : nvars(nv) {}
  MultiPoly(int nv, const Rational& c) : nvars(nv) {
    if (!c.is_zero()) terms[std::vector<int>(nv, 0)] = c;
  }

  static MultiPoly variable(int nv, int i, const Rational& coeff = Rational(1)) {
    MultiPoly p(nv);
    std::vector<int> e(nv, 0);
    e[i] = 1;
    if (!coeff.is_zero()) p.terms[e] = coeff;
    return p;
  }

  bool is_zero() const { return terms.empty(); }

  void add_term(const std::vector<int>& e, const Rational& c) {
    auto it = terms.find(e);
    Rational v = (it == terms.end() ? Rational(0) : it->second) + c;
    if (v.is_zero()) { if (it != terms.end()) terms.erase(it); }
    else terms[e] = v;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    check(a, b);
    MultiPoly r = a;
    for (auto& [e, c] : b.terms) r.add_term(e, c);
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    check(a, b);
    MultiPoly r = a;
    for (auto& [e, c] : b.terms) r.add_term(e, -c);
    return r;
  }
  MultiPoly operator-() const {
    MultiPoly r(nvars);
    for (auto& [e, c] : terms) r.terms[e] = -c;
    return r;
  }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    check(a, b);
    MultiPoly r(a.nvars);
    for (auto& [ea, ca] : a.terms)
      for (auto& [eb, cb] : b.terms) {
        std::vector<int> e(a.nvars);
        for (int i = 0; i < a.nvars; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars == b.nvars && a.terms == b.terms;
  }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  std::string str(const std::vector<std::string>& names = {}) const {
    if (terms.empty()) return "0";
    std::string s;
    for (auto& [e, c] : terms) {
      std::string mono;
      for (int i = 0; i < nvars; ++i)
        if (e[i]) {
          std::string v = i < (int)names.size() ? names[i] : "x" + std::to_string(i);
          mono += (mono.empty() ? "" : "*") + v;
          if (e[i] != 1) mono += "^" + std::to_string(e[i]);
        }
      std::string t = c.str();
      if (!mono.empty()) t = (c == Rational(1) ? "" : c == Rational(-1) ? "-" : t + "*") + mono;
      s += (s.empty() ? "" : " + ") + t;
    }
    return s;
  }
  friend std::ostream& operator<<(std::ostream& os, const MultiPoly& p) { return os << p.str(); }

 private:
  static void check(const MultiPoly& a, const MultiPoly& b) {
    if (a.nvars != b.nvars) throw std::invalid_argument("MultiPoly variable count mismatch");
  }
};

}  // namespace wallx
