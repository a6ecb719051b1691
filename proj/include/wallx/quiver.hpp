#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wallx/algebra.hpp"
#include "wallx/groupoid.hpp"
#include "wallx/laurent.hpp"

namespace wallx {

struct NoSuchMorphism : std::domain_error {
  using std::domain_error::domain_error;
};
struct ShiftedTerm : std::domain_error {
  using std::domain_error::domain_error;
};
struct CutoffExceeded : std::domain_error {
  using std::domain_error::domain_error;
};

// ---- indecomposables ------------------------------------------------------

// M_{ij}[shift] with 0 <= i < j.  M_{ii} is the zero object and is never
// stored; operations that would emit it drop the summand instead.
struct Indec {
  int i = 0;
  int j = 1;
  int shift = 0;

  Indec() = default;
  Indec(int i_, int j_, int shift_ = 0) : i(i_), j(j_), shift(shift_) {
    if (i < 0 || i >= j) throw std::domain_error("Indec needs 0 <= i < j");
  }

  Indec shifted(int by) const { return Indec(i, j, shift + by); }

  friend bool operator==(const Indec& a, const Indec& b) {
    return a.i == b.i && a.j == b.j && a.shift == b.shift;
  }
  friend bool operator!=(const Indec& a, const Indec& b) { return !(a == b); }
  friend bool operator<(const Indec& a, const Indec& b) {
    return std::tie(a.i, a.j, a.shift) < std::tie(b.i, b.j, b.shift);
  }

  std::string str() const {
    std::string s = "M" + std::to_string(i) + std::to_string(j);
    if (shift) s += "[" + std::to_string(shift) + "]";
    return s;
  }
};

// ---- graded homs ----------------------------------------------------------

// Graded dims of Hom(a, b).  Two index patterns give a one-dimensional space
// (the degree-0 map, respectively the extension class); everything else is 0.
// Shifting a by r and b by s moves the degree by r - s.
inline std::map<int, int> hom_ext(const Indec& a, const Indec& b) {
  std::map<int, int> t;
  if (a.i <= b.i && b.i < a.j && a.j <= b.j)
    t[a.shift - b.shift] = 1;
  else if (b.i < a.i && a.i <= b.j && b.j < a.j)
    t[1 + a.shift - b.shift] = 1;
  return t;
}

inline int hom_dim(const Indec& a, const Indec& b, int d) {
  auto t = hom_ext(a, b);
  auto it = t.find(d);
  return it == t.end() ? 0 : it->second;
}

enum class ConeKind { alpha, beta, zero };

// Cone of the canonical degree-0 map a -> b (alpha), of the canonical class
// in Ext^1(a, b) (beta), or of the zero map a -> b.  alpha/beta require the
// one-dimensional space to exist at matching shifts.
inline std::vector<Indec> cone_of(const Indec& a, const Indec& b, ConeKind kind) {
  std::vector<Indec> out;
  auto push = [&out](int i, int j, int s) {
    if (i != j) out.emplace_back(i, j, s);
  };
  switch (kind) {
    case ConeKind::zero:
      out.push_back(b);
      out.push_back(a.shifted(1));
      return out;
    case ConeKind::alpha:
      if (a.shift != b.shift || !(a.i <= b.i && b.i < a.j && a.j <= b.j))
        throw NoSuchMorphism("no degree-0 map " + a.str() + " -> " + b.str());
      push(a.j, b.j, a.shift);
      push(a.i, b.i, a.shift + 1);
      return out;
    case ConeKind::beta:
      if (a.shift != b.shift || !(b.i < a.i && a.i <= b.j && b.j < a.j))
        throw NoSuchMorphism("no extension of " + a.str() + " by " + b.str());
      push(a.i, b.j, a.shift);
      push(b.i, a.j, a.shift);
      return out;
  }
  throw std::logic_error("unhandled cone kind");
}

// ---- restricted Hall algebra ------------------------------------------------

// Finite L-linear combination of shifted indecomposables.
struct HallElement {
  std::map<Indec, LaurentScalar> terms;

  void add_term(const Indec& m, const LaurentScalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms.try_emplace(m, c);
    if (fresh) return;
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
  bool is_zero() const { return terms.empty(); }
  LaurentScalar coeff(const Indec& m) const {
    auto it = terms.find(m);
    return it == terms.end() ? LaurentScalar() : it->second;
  }

  friend HallElement operator+(const HallElement& x, const HallElement& y) {
    HallElement r = x;
    for (const auto& [m, c] : y.terms) r.add_term(m, c);
    return r;
  }
  friend bool operator==(const HallElement& x, const HallElement& y) {
    return x.terms == y.terms;
  }
  friend bool operator!=(const HallElement& x, const HallElement& y) { return !(x == y); }

  std::string str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")" + m.str();
    }
    return s;
  }
};

inline HallElement rho(const Indec& m) {
  HallElement e;
  e.add_term(m, LaurentScalar(1));
  return e;
}

// Optional weight hook: nu(k, i, j) scales the (k,i,j) contribution by L^{-nu}.
using CorrWeight = std::function<int(int, int, int)>;

// Correspondence product: composable pairs M_ki . M_ij at a common shift
// multiply to (L - 1) M_kj -- the punctured one-dimensional extension group,
// all of whose cones are M_kj -- and every other basis pair gives zero.
inline HallElement corr_product(const HallElement& x, const HallElement& y,
                                const CorrWeight& nu = {}) {
  const LaurentScalar punctured_line = LaurentScalar::L() - LaurentScalar(1);
  HallElement out;
  for (const auto& [a, ca] : x.terms)
    for (const auto& [b, cb] : y.terms) {
      if (a.shift != b.shift || a.j != b.i) continue;
      LaurentScalar w = punctured_line;
      if (nu) w *= LaurentScalar::power(-nu(a.i, a.j, b.j));
      out.add_term(Indec(a.i, b.j, a.shift), ca * cb * w);
    }
  return out;
}

// Matrix realization over U_{n+1}: the coefficient of M_ij lands in row i,
// column j.  On these variety-normalized classes the product identity reads
// integrate(x*y) == (L-1) * integrate(x) * integrate(y); dividing every class
// by its automorphism count |Aut(M_ij)| = L-1 would absorb the twist.
inline Matrix<LaurentScalar> integrate(const HallElement& x, int n) {
  Matrix<LaurentScalar> m(n + 1, LaurentScalar());
  for (const auto& [t, c] : x.terms) {
    if (t.shift != 0) throw ShiftedTerm("matrix model needs shift 0, got " + t.str());
    if (t.j > n) throw std::domain_error("index exceeds matrix size: " + t.str());
    m.e[t.i][t.j] += c;
  }
  return m;
}

// ---- charge grading ---------------------------------------------------------

// phi(u_ij) = e_j - e_i extended linearly; input in simple-root coordinates.
inline IntVec phi_map(const IntVec& root_dims) {
  return an_phi((int)root_dims.size()).apply(root_dims);
}

inline IntVec phi_of(const Indec& m, int n) {
  if (m.j > n) throw std::domain_error("index exceeds vertex range: " + m.str());
  return phi_map(an_root(n, m.i, m.j));
}

// ---- iso-classes of objects -------------------------------------------------

// Multiplicity vector over shifted indecomposables; the zero object is the
// empty map.  Shift-0 only for the module-level oracle ops.
using ObjClass = std::map<Indec, int>;

inline std::map<int, int> class_hom(const ObjClass& a, const ObjClass& b) {
  std::map<int, int> t;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b)
      for (const auto& [d, dim] : hom_ext(ma, mb)) t[d] += ca * cb * dim;
  return t;
}

// truncated Euler characteristic (a, b)_{<=N}; negative degrees contribute for
// shifted pairs and must not be dropped.
inline long long truncated_pairing(const ObjClass& a, const ObjClass& b, int N = 0) {
  long long acc = 0;
  for (const auto& [d, dim] : class_hom(a, b))
    if (d <= N) acc += (d % 2 == 0) ? dim : -dim;
  return acc;
}

inline BigInt bigint_pow(long long base, long long e) {
  if (e < 0) throw std::domain_error("bigint_pow needs e >= 0");
  BigInt r = 1, x = base;
  for (long long k = e; k; k >>= 1) {
    if (k & 1) r *= x;
    x *= x;
  }
  return r;
}

inline BigInt gl_order(long long q, int m) {
  BigInt r = 1;
  for (int t = 0; t < m; ++t) r *= bigint_pow(q, m) - bigint_pow(q, t);
  return r;
}

// |Aut(sum M_t^{m_t})| = prod |GL_{m_t}(F_q)| * q^{sum_{s != t} m_s m_t hom0(M_s, M_t)}
inline BigInt aut_order(long long q, const ObjClass& cls) {
  BigInt r = 1;
  long long rad = 0;
  for (const auto& [ms, cs] : cls) {
    r *= gl_order(q, cs);
    for (const auto& [mt, ct] : cls)
      if (!(ms == mt)) rad += (long long)cs * ct * hom_dim(ms, mt, 0);
  }
  return r * bigint_pow(q, rad);
}

// shift-blind total dimension vector over vertices 1..n
inline std::vector<int> class_dims(const ObjClass& cls, int n) {
  std::vector<int> d(n, 0);
  for (const auto& [m, mult] : cls) {
    if (m.j > n) throw std::domain_error("index exceeds vertex range: " + m.str());
    for (int v = m.i + 1; v <= m.j; ++v) d[v - 1] += mult;
  }
  return d;
}

// ---- dense linear algebra over F_q ------------------------------------------

namespace fqdetail {

struct FqMat {
  int rows = 0, cols = 0;
  std::vector<int> a;

  static FqMat zero(int r, int c) {
    FqMat m;
    m.rows = r;
    m.cols = c;
    m.a.assign((size_t)r * c, 0);
    return m;
  }
  static FqMat id(int n) {
    FqMat m = zero(n, n);
    for (int k = 0; k < n; ++k) m.at(k, k) = 1;
    return m;
  }
  int& at(int r, int c) { return a[(size_t)r * cols + c]; }
  int at(int r, int c) const { return a[(size_t)r * cols + c]; }
};

inline int fq_norm(long long v, long long q) {
  long long r = v % q;
  if (r < 0) r += q;
  return (int)r;
}

inline int fq_inv(int v, long long q) {
  long long t = 0, nt = 1, r = q, nr = fq_norm(v, q);
  while (nr != 0) {
    long long k = r / nr;
    long long tmp = t - k * nt;
    t = nt;
    nt = tmp;
    tmp = r - k * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw std::logic_error("fq_inv of a non-unit");
  return fq_norm(t, q);
}

inline FqMat fq_mul(const FqMat& x, const FqMat& y, long long q) {
  if (x.cols != y.rows) throw std::logic_error("fq_mul shape mismatch");
  FqMat r = FqMat::zero(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      int xv = x.at(i, k);
      if (!xv) continue;
      for (int j = 0; j < y.cols; ++j)
        r.at(i, j) = fq_norm(r.at(i, j) + (long long)xv * y.at(k, j), q);
    }
  return r;
}

// in-place reduced row echelon; returns pivot column indices
inline std::vector<int> fq_rref(FqMat& m, long long q) {
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int sel = -1;
    for (int rr = r; rr < m.rows; ++rr)
      if (m.at(rr, c) != 0) {
        sel = rr;
        break;
      }
    if (sel < 0) continue;
    for (int cc = 0; cc < m.cols; ++cc) std::swap(m.at(sel, cc), m.at(r, cc));
    int inv = fq_inv(m.at(r, c), q);
    for (int cc = 0; cc < m.cols; ++cc) m.at(r, cc) = fq_norm((long long)m.at(r, cc) * inv, q);
    for (int rr = 0; rr < m.rows; ++rr) {
      if (rr == r || m.at(rr, c) == 0) continue;
      long long f = m.at(rr, c);
      for (int cc = 0; cc < m.cols; ++cc)
        m.at(rr, cc) = fq_norm(m.at(rr, cc) - f * m.at(r, cc), q);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

inline int fq_rank(FqMat m, long long q) { return (int)fq_rref(m, q).size(); }

// columns form a basis of ker(m)
inline FqMat fq_kernel(FqMat m, long long q) {
  auto piv = fq_rref(m, q);
  std::vector<int> free_cols;
  {
    std::vector<char> is_piv(m.cols, 0);
    for (int c : piv) is_piv[c] = 1;
    for (int c = 0; c < m.cols; ++c)
      if (!is_piv[c]) free_cols.push_back(c);
  }
  FqMat k = FqMat::zero(m.cols, (int)free_cols.size());
  for (int t = 0; t < (int)free_cols.size(); ++t) {
    int fc = free_cols[t];
    k.at(fc, t) = 1;
    for (int p = 0; p < (int)piv.size(); ++p)
      k.at(piv[p], t) = fq_norm(-(long long)m.at(p, fc), q);
  }
  return k;
}

// particular solution of m z = b with free variables set to zero
inline std::optional<std::vector<int>> fq_solve(const FqMat& m, const std::vector<int>& b,
                                                long long q) {
  FqMat aug = FqMat::zero(m.rows, m.cols + 1);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, m.cols) = fq_norm(b[r], q);
  }
  auto piv = fq_rref(aug, q);
  if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
  std::vector<int> z(m.cols, 0);
  for (int p = 0; p < (int)piv.size(); ++p) z[piv[p]] = aug.at(p, m.cols);
  return z;
}

}  // namespace fqdetail

// ---- F_q representations ----------------------------------------------------

// representation of the A_n quiver, vertices 1..n, arrows v -> v-1 over F_q
struct FqRep {
  long long q = 2;
  int n = 0;
  std::vector<int> dims;               // dims[v-1], size n
  std::vector<fqdetail::FqMat> maps;   // maps[v-2] : vertex v -> v-1, size max(n-1, 0)

  void validate() const {
    if ((int)dims.size() != n || (int)maps.size() != std::max(n - 1, 0))
      throw std::logic_error("FqRep shape");
    for (int v = 2; v <= n; ++v)
      if (maps[v - 2].rows != dims[v - 2] || maps[v - 2].cols != dims[v - 1])
        throw std::logic_error("FqRep arrow shape at vertex " + std::to_string(v));
  }
};

// block sum of shift-0 indecomposables; each summand occupies one slot per
// vertex it touches, arrows act as identities between matching slots.
inline FqRep rep_of(long long q, int n, const ObjClass& cls) {
  std::vector<Indec> summands;
  for (const auto& [m, mult] : cls) {
    if (m.shift != 0) throw ShiftedTerm("rep_of needs shift 0, got " + m.str());
    if (m.j > n) throw std::domain_error("index exceeds vertex range: " + m.str());
    if (mult <= 0) throw std::domain_error("class multiplicities must be positive");
    for (int t = 0; t < mult; ++t) summands.push_back(m);
  }
  std::vector<std::vector<int>> slot(n + 1);  // slot[v] = summand ids present at vertex v
  for (int s = 0; s < (int)summands.size(); ++s)
    for (int v = summands[s].i + 1; v <= summands[s].j; ++v) slot[v].push_back(s);

  FqRep r;
  r.q = q;
  r.n = n;
  r.dims.resize(n);
  for (int v = 1; v <= n; ++v) r.dims[v - 1] = (int)slot[v].size();
  for (int v = 2; v <= n; ++v) {
    auto m = fqdetail::FqMat::zero(r.dims[v - 2], r.dims[v - 1]);
    for (int c = 0; c < (int)slot[v].size(); ++c)
      for (int rr = 0; rr < (int)slot[v - 1].size(); ++rr)
        if (slot[v - 1][rr] == slot[v][c]) m.at(rr, c) = 1;
    r.maps.push_back(std::move(m));
  }
  r.validate();
  return r;
}

// Multiplicities of each M_kl inside r, from ranks of arrow composites:
// with N(u, v) = rank of the composed map vertex v -> vertex u (N(v,v) = dim),
// the multiplicity of M_kl is N(k+1,l) - N(k,l) - N(k+1,l+1) + N(k,l+1).
inline std::map<std::pair<int, int>, int> krull_schmidt(const FqRep& r) {
  r.validate();
  int n = r.n;
  std::vector<std::vector<int>> table(n + 2, std::vector<int>(n + 2, 0));
  for (int v = 1; v <= n; ++v) {
    fqdetail::FqMat comp = fqdetail::FqMat::id(r.dims[v - 1]);
    table[v][v] = r.dims[v - 1];
    for (int u = v - 1; u >= 1; --u) {
      comp = fqdetail::fq_mul(r.maps[u - 1], comp, r.q);
      table[u][v] = fqdetail::fq_rank(comp, r.q);
    }
  }
  auto N = [&](int u, int v) -> int {
    if (u < 1 || v > n || u > v) return 0;
    return table[u][v];
  };
  std::map<std::pair<int, int>, int> mult;
  std::vector<int> recon(n, 0);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l <= n; ++l) {
      int m = N(k + 1, l) - N(k, l) - N(k + 1, l + 1) + N(k, l + 1);
      if (m < 0) throw std::logic_error("negative multiplicity in decomposition");
      if (m > 0) {
        mult[{k, l}] = m;
        for (int v = k + 1; v <= l; ++v) recon[v - 1] += m;
      }
    }
  if (recon != r.dims) throw std::logic_error("decomposition does not add up");
  return mult;
}

namespace fqdetail {

// the two-term hom complex of rep maps A -> B:
//   C0 = sum_v Hom(A_v, B_v) --d--> C1 = sum_{v >= 2} Hom(A_v, B_{v-1}),
//   (d phi)_v = f^B_v phi_v - phi_{v-1} f^A_v.
struct RepHomData {
  int c0 = 0, c1 = 0, rank_d = 0;
  FqMat d;
};

inline RepHomData rep_hom_data(const FqRep& A, const FqRep& B) {
  if (A.n != B.n || A.q != B.q) throw std::logic_error("rep mismatch");
  int n = A.n;
  std::vector<int> off0(n + 1, 0), off1(n + 1, 0);
  RepHomData h;
  for (int v = 1; v <= n; ++v) {
    off0[v] = h.c0;
    h.c0 += B.dims[v - 1] * A.dims[v - 1];
  }
  for (int v = 2; v <= n; ++v) {
    off1[v] = h.c1;
    h.c1 += B.dims[v - 2] * A.dims[v - 1];
  }
  auto var0 = [&](int v, int r, int c) { return off0[v] + r * A.dims[v - 1] + c; };
  auto var1 = [&](int v, int r, int c) { return off1[v] + r * A.dims[v - 1] + c; };
  h.d = FqMat::zero(h.c1, h.c0);
  for (int v = 2; v <= n; ++v)
    for (int r = 0; r < B.dims[v - 2]; ++r)
      for (int c = 0; c < A.dims[v - 1]; ++c) {
        int row = var1(v, r, c);
        for (int t = 0; t < B.dims[v - 1]; ++t)
          h.d.at(row, var0(v, t, c)) = B.maps[v - 2].at(r, t);
        for (int t = 0; t < A.dims[v - 2]; ++t)
          h.d.at(row, var0(v - 1, r, t)) =
              fq_norm(h.d.at(row, var0(v - 1, r, t)) - A.maps[v - 2].at(t, c), A.q);
      }
  h.rank_d = fq_rank(h.d, A.q);
  return h;
}

// middle term of the extension of A (quotient) by B (sub) along the cocycle
// xi = (xi_v : A_v -> B_{v-1}) laid out as in rep_hom_data(A, B)
inline FqRep rep_middle(const FqRep& A, const FqRep& B, const std::vector<int>& xi) {
  int n = A.n;
  FqRep e;
  e.q = A.q;
  e.n = n;
  e.dims.resize(n);
  for (int v = 1; v <= n; ++v) e.dims[v - 1] = B.dims[v - 1] + A.dims[v - 1];
  int off = 0;
  for (int v = 2; v <= n; ++v) {
    auto m = FqMat::zero(e.dims[v - 2], e.dims[v - 1]);
    int br = B.dims[v - 2], bc = B.dims[v - 1];
    for (int r = 0; r < br; ++r)
      for (int c = 0; c < bc; ++c) m.at(r, c) = B.maps[v - 2].at(r, c);
    for (int r = 0; r < A.dims[v - 2]; ++r)
      for (int c = 0; c < A.dims[v - 1]; ++c) m.at(br + r, bc + c) = A.maps[v - 2].at(r, c);
    for (int r = 0; r < br; ++r)
      for (int c = 0; c < A.dims[v - 1]; ++c) m.at(r, bc + c) = xi[off + r * A.dims[v - 1] + c];
    off += br * A.dims[v - 1];
    e.maps.push_back(std::move(m));
  }
  e.validate();
  return e;
}

// odometer over vectors in F_q^len
inline bool fq_next(std::vector<int>& v, long long q) {
  for (size_t t = 0; t < v.size(); ++t) {
    if (++v[t] < q) return true;
    v[t] = 0;
  }
  return false;
}

}  // namespace fqdetail

// ---- module-level oracle ------------------------------------------------------

struct ExtCounts {
  BigInt hom_count = 1;
  BigInt ext_count = 1;
  long long indec_cone_count = 0;
};

// brute-force counts over F_q of |Hom(a, b)|, |Ext^1(a, b)| and of the
// extension classes of a by b with indecomposable middle term
inline ExtCounts fq_ext_count(long long q, const Indec& a, const Indec& b) {
  if (a.shift != 0 || b.shift != 0)
    throw ShiftedTerm("fq_ext_count needs shift 0");
  int n = std::max(a.j, b.j);
  FqRep A = rep_of(q, n, {{Indec(a.i, a.j), 1}});
  FqRep B = rep_of(q, n, {{Indec(b.i, b.j), 1}});
  auto h = fqdetail::rep_hom_data(A, B);
  ExtCounts out;
  out.hom_count = bigint_pow(q, h.c0 - h.rank_d);
  out.ext_count = bigint_pow(q, h.c1 - h.rank_d);
  long long indec_cocycles = 0;
  std::vector<int> xi(h.c1, 0);
  do {
    auto ks = krull_schmidt(fqdetail::rep_middle(A, B, xi));
    if (ks.size() == 1 && ks.begin()->second == 1) ++indec_cocycles;
  } while (fqdetail::fq_next(xi, q));
  BigInt cosets = bigint_pow(q, h.rank_d);
  if (indec_cocycles % cosets != 0)
    throw std::logic_error("indecomposable count not constant on Ext classes");
  out.indec_cone_count = (long long)(BigInt(indec_cocycles) / cosets);
  return out;
}

// oracle Hall element: distribution over iso-classes with exact q-weights
using HallDist = std::map<ObjClass, BigRat>;

inline void hall_dist_add(HallDist& into, const ObjClass& cls, const BigRat& w) {
  BigRat& slot = into[cls];
  slot += w;
  if (slot == 0) into.erase(cls);
}

// full Hall product at L = q: enumerate Ext^1(y, x) (x the sub side), weight
// by q^{-(y,x)_{<=0}}, decompose middles by rank counting.  Raw cocycle
// buckets must split into equal-size Ext-classes; we assert that they do.
inline HallDist fq_hall_product(long long q, const ObjClass& x, const ObjClass& y,
                                const std::vector<int>& dim_cutoff) {
  int n = (int)dim_cutoff.size();
  auto dx = class_dims(x, n), dy = class_dims(y, n);
  for (int v = 0; v < n; ++v)
    if (dx[v] + dy[v] > dim_cutoff[v])
      throw CutoffExceeded("total dimension exceeds cutoff at vertex " + std::to_string(v + 1));
  FqRep X = rep_of(q, n, x);
  FqRep Y = rep_of(q, n, y);
  auto h = fqdetail::rep_hom_data(Y, X);
  long long hom_yx = h.c0 - h.rank_d;  // dim Hom(Y, X) = (y, x)_{<=0} for modules
  std::map<ObjClass, long long> bucket;
  std::vector<int> xi(h.c1, 0);
  do {
    auto ks = krull_schmidt(fqdetail::rep_middle(Y, X, xi));
    ObjClass cls;
    for (const auto& [ij, m] : ks) cls[Indec(ij.first, ij.second)] = m;
    ++bucket[cls];
  } while (fqdetail::fq_next(xi, q));
  BigInt cosets = bigint_pow(q, h.rank_d);
  BigRat weight = bigrat_pow(BigRat(q), (int)-hom_yx);
  HallDist out;
  for (const auto& [cls, count] : bucket) {
    if (count % cosets != 0)
      throw std::logic_error("middle class not constant on Ext classes");
    hall_dist_add(out, cls, BigRat(BigInt(count) / cosets) * weight);
  }
  return out;
}

// bilinear extension of fq_hall_product to distributions
inline HallDist fq_hall_mul(long long q, const HallDist& x, const HallDist& y,
                            const std::vector<int>& dim_cutoff) {
  HallDist out;
  for (const auto& [cx, wx] : x)
    for (const auto& [cy, wy] : y)
      for (const auto& [cls, w] : fq_hall_product(q, cx, cy, dim_cutoff))
        hall_dist_add(out, cls, w * wx * wy);
  return out;
}

// ---- derived oracle (shifted objects as complexes of projectives) -------------

namespace fqdetail {

// bounded complex of projectives P_a = M_{0a}, a in 1..n.  Hom(P_s, P_t) is
// one-dimensional iff s <= t; a differential entry stores the scalar of the
// canonical generator, so entries with source label > target label are banned.
struct ProjComplex {
  long long q = 2;
  int n = 0;
  std::map<int, std::vector<int>> gen;  // degree -> projective labels
  std::map<int, FqMat> dif;             // degree k -> matrix gen[k+1] x gen[k]

  const std::vector<int>& gens_at(int k) const {
    static const std::vector<int> none;
    auto it = gen.find(k);
    return it == gen.end() ? none : it->second;
  }
  FqMat dif_at(int k) const {
    auto it = dif.find(k);
    if (it != dif.end()) return it->second;
    return FqMat::zero((int)gens_at(k + 1).size(), (int)gens_at(k).size());
  }

  void validate() const {
    for (const auto& [k, m] : dif) {
      if (m.rows != (int)gens_at(k + 1).size() || m.cols != (int)gens_at(k).size())
        throw std::logic_error("ProjComplex differential shape");
      for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c)
          if (m.at(r, c) != 0 && gens_at(k)[c] > gens_at(k + 1)[r])
            throw std::logic_error("ProjComplex entry violates Hom(P_s, P_t) support");
    }
    for (const auto& [k, m] : dif) {
      (void)m;
      FqMat sq = fq_mul(dif_at(k + 1), dif_at(k), q);
      for (int v : sq.a)
        if (v != 0) throw std::logic_error("ProjComplex differential does not square to zero");
    }
  }
};

// M_ij[r] = [P_i -> P_j] in degrees -r-1, -r (the P_0 term is dropped)
inline ProjComplex proj_complex(long long q, int n, const ObjClass& cls) {
  ProjComplex C;
  C.q = q;
  C.n = n;
  std::vector<std::pair<Indec, std::pair<int, int>>> placed;  // summand -> (col at -r-1, col at -r)
  for (const auto& [m, mult] : cls) {
    if (m.j > n) throw std::domain_error("index exceeds vertex range: " + m.str());
    if (mult <= 0) throw std::domain_error("class multiplicities must be positive");
    for (int t = 0; t < mult; ++t) {
      int top = -m.shift;
      auto& g_top = C.gen[top];
      int col_top = (int)g_top.size();
      g_top.push_back(m.j);
      int col_bot = -1;
      if (m.i >= 1) {
        auto& g_bot = C.gen[top - 1];
        col_bot = (int)g_bot.size();
        g_bot.push_back(m.i);
      }
      placed.push_back({m, {col_bot, col_top}});
    }
  }
  for (const auto& [k, g] : C.gen) {
    (void)g;
    if (!C.gen.count(k + 1)) continue;
    C.dif[k] = FqMat::zero((int)C.gen[k + 1].size(), (int)C.gen[k].size());
  }
  for (const auto& [m, cols] : placed) {
    if (cols.first < 0) continue;
    int bot_deg = -m.shift - 1;
    auto it = C.dif.find(bot_deg);
    if (it == C.dif.end())
      it = C.dif.emplace(bot_deg, FqMat::zero((int)C.gen[bot_deg + 1].size(),
                                              (int)C.gen[bot_deg].size())).first;
    it->second.at(cols.second, cols.first) = 1;
  }
  C.validate();
  return C;
}

inline ProjComplex pc_shift(const ProjComplex& c, int s) {
  ProjComplex r;
  r.q = c.q;
  r.n = c.n;
  for (const auto& [k, g] : c.gen) r.gen[k - s] = g;
  for (const auto& [k, m] : c.dif) {
    FqMat t = m;
    if (s % 2 != 0)
      for (int& v : t.a) v = fq_norm(-(long long)v, c.q);
    r.dif[k - s] = std::move(t);
  }
  return r;
}

// degree-0 chain maps A -> B and the homotopy coboundaries among them
struct ChainMapSpace {
  std::vector<std::tuple<int, int, int>> vars;  // (degree, src col in A, tgt row in B)
  FqMat basis;                                  // columns = basis of the chain-map space
  int boundary_rank = 0;
};

inline ChainMapSpace chain_maps(const ProjComplex& A, const ProjComplex& B) {
  if (A.q != B.q || A.n != B.n) throw std::logic_error("complex mismatch");
  long long q = A.q;
  ChainMapSpace S;
  std::map<std::tuple<int, int, int>, int> vid;
  std::vector<int> degrees;
  {
    std::map<int, char> degs;
    for (const auto& [k, g] : A.gen) (void)g, degs[k] = 1;
    for (const auto& [k, g] : B.gen) (void)g, degs[k] = 1;
    for (const auto& [k, f] : degs) (void)f, degrees.push_back(k);
  }
  for (int k : degrees) {
    const auto& ga = A.gens_at(k);
    const auto& gb = B.gens_at(k);
    for (int c = 0; c < (int)ga.size(); ++c)
      for (int r = 0; r < (int)gb.size(); ++r)
        if (ga[c] <= gb[r]) {
          vid[{k, c, r}] = (int)S.vars.size();
          S.vars.push_back({k, c, r});
        }
  }
  // chain condition per degree k: d_B^k f^k - f^{k+1} d_A^k = 0
  std::vector<std::vector<int>> rows;
  for (int k : degrees) {
    FqMat da = A.dif_at(k);
    FqMat db = B.dif_at(k);
    const auto& ga = A.gens_at(k);
    const auto& gb1 = B.gens_at(k + 1);
    for (int c = 0; c < (int)ga.size(); ++c)
      for (int r = 0; r < (int)gb1.size(); ++r) {
        std::vector<int> row(S.vars.size(), 0);
        bool nonzero = false;
        for (int t = 0; t < db.cols; ++t) {
          if (db.at(r, t) == 0) continue;
          auto it = vid.find({k, c, t});
          if (it == vid.end()) continue;  // banned entry is identically zero
          row[it->second] = fq_norm(row[it->second] + db.at(r, t), q);
          nonzero = true;
        }
        for (int t = 0; t < da.rows; ++t) {
          if (da.at(t, c) == 0) continue;
          auto it = vid.find({k + 1, t, r});
          if (it == vid.end()) continue;
          row[it->second] = fq_norm(row[it->second] - da.at(t, c), q);
          nonzero = true;
        }
        if (nonzero) rows.push_back(std::move(row));
      }
  }
  FqMat cond = FqMat::zero((int)rows.size(), (int)S.vars.size());
  for (int r = 0; r < (int)rows.size(); ++r)
    for (int c = 0; c < (int)S.vars.size(); ++c) cond.at(r, c) = rows[r][c];
  S.basis = fq_kernel(cond, q);

  // homotopies h: A^k -> B^{k-1}; their boundaries d_B h + h d_A land in the
  // chain-map space and span the null-homotopic maps
  std::vector<std::tuple<int, int, int>> hvars;
  std::map<std::tuple<int, int, int>, int> hid;
  for (int k : degrees) {
    const auto& ga = A.gens_at(k);
    const auto& gb = B.gens_at(k - 1);
    for (int c = 0; c < (int)ga.size(); ++c)
      for (int r = 0; r < (int)gb.size(); ++r)
        if (ga[c] <= gb[r]) {
          hid[{k, c, r}] = (int)hvars.size();
          hvars.push_back({k, c, r});
        }
  }
  FqMat bnd = FqMat::zero((int)S.vars.size(), (int)hvars.size());
  for (int vi = 0; vi < (int)S.vars.size(); ++vi) {
    auto [k, c, r] = S.vars[vi];
    FqMat db = B.dif_at(k - 1);
    for (int t = 0; t < db.cols; ++t) {
      if (db.at(r, t) == 0) continue;
      auto it = hid.find({k, c, t});
      if (it == hid.end()) continue;
      bnd.at(vi, it->second) = fq_norm(bnd.at(vi, it->second) + db.at(r, t), q);
    }
    FqMat da = A.dif_at(k);
    for (int t = 0; t < da.rows; ++t) {
      if (da.at(t, c) == 0) continue;
      auto it = hid.find({k + 1, t, r});
      if (it == hid.end()) continue;
      bnd.at(vi, it->second) = fq_norm(bnd.at(vi, it->second) + da.at(t, c), q);
    }
  }
  S.boundary_rank = fq_rank(bnd, q);
  return S;
}

// cone of the chain map f: A -> B.  C^k = A^{k+1} + B^k with
// d(a, b) = (-d_A a, f a + d_B b).
inline ProjComplex pc_cone(const ProjComplex& A, const ProjComplex& B,
                           const std::map<int, FqMat>& f) {
  ProjComplex C;
  C.q = A.q;
  C.n = A.n;
  std::map<int, char> degs;
  for (const auto& [k, g] : A.gen) (void)g, degs[k - 1] = 1;
  for (const auto& [k, g] : B.gen) (void)g, degs[k] = 1;
  for (const auto& [k, f_] : degs) {
    (void)f_;
    auto& g = C.gen[k];
    for (int label : A.gens_at(k + 1)) g.push_back(label);
    for (int label : B.gens_at(k)) g.push_back(label);
    if (g.empty()) C.gen.erase(k);
  }
  for (const auto& [k, g] : C.gen) {
    (void)g;
    int na1 = (int)A.gens_at(k + 1).size(), nb = (int)B.gens_at(k).size();
    int na2 = (int)A.gens_at(k + 2).size(), nb1 = (int)B.gens_at(k + 1).size();
    if (na2 + nb1 == 0) continue;
    FqMat m = FqMat::zero(na2 + nb1, na1 + nb);
    FqMat da = A.dif_at(k + 1);
    for (int r = 0; r < na2; ++r)
      for (int c = 0; c < na1; ++c) m.at(r, c) = fq_norm(-(long long)da.at(r, c), A.q);
    auto itf = f.find(k + 1);
    if (itf != f.end())
      for (int r = 0; r < nb1; ++r)
        for (int c = 0; c < na1; ++c) m.at(na2 + r, c) = itf->second.at(r, c);
    FqMat db = B.dif_at(k);
    for (int r = 0; r < nb1; ++r)
      for (int c = 0; c < nb; ++c) m.at(na2 + r, na1 + c) = db.at(r, c);
    C.dif[k] = std::move(m);
  }
  C.validate();
  return C;
}

// vertex-wise homology of a complex of projectives, decomposed into shifted
// indecomposables (the category is hereditary, so the object is the sum of
// its homology reps placed back in their degrees)
inline ObjClass pc_homology_class(const ProjComplex& C) {
  long long q = C.q;
  int n = C.n;
  ObjClass out;
  if (C.gen.empty()) return out;
  int klo = C.gen.begin()->first, khi = C.gen.rbegin()->first;
  for (int k = klo; k <= khi; ++k) {
    const auto& g = C.gens_at(k);
    // per-vertex pieces: basis slots are the gens with label >= v
    std::vector<std::vector<int>> keep(n + 2);
    for (int v = 1; v <= n; ++v)
      for (int t = 0; t < (int)g.size(); ++t)
        if (g[t] >= v) keep[v].push_back(t);
    auto restrict_cols = [](const FqMat& m, const std::vector<int>& rows,
                            const std::vector<int>& cols) {
      FqMat r = FqMat::zero((int)rows.size(), (int)cols.size());
      for (int a = 0; a < (int)rows.size(); ++a)
        for (int b = 0; b < (int)cols.size(); ++b) r.at(a, b) = m.at(rows[a], cols[b]);
      return r;
    };
    std::vector<std::vector<int>> keep_up(n + 2), keep_dn(n + 2);
    const auto& g_up = C.gens_at(k + 1);
    const auto& g_dn = C.gens_at(k - 1);
    for (int v = 1; v <= n; ++v) {
      for (int t = 0; t < (int)g_up.size(); ++t)
        if (g_up[t] >= v) keep_up[v].push_back(t);
      for (int t = 0; t < (int)g_dn.size(); ++t)
        if (g_dn[t] >= v) keep_dn[v].push_back(t);
    }
    FqMat dk = C.dif_at(k), dkm = C.dif_at(k - 1);

    // homology basis per vertex: complement of the image inside the kernel
    std::vector<FqMat> hbasis(n + 1);  // columns in gen coordinates of degree k
    std::vector<FqMat> ibasis(n + 1);  // image spanning columns
    for (int v = 1; v <= n; ++v) {
      FqMat del = restrict_cols(dk, keep_up[v], keep[v]);
      FqMat img = restrict_cols(dkm, keep[v], keep_dn[v]);
      FqMat ker = fq_kernel(del, q);
      FqMat cat = FqMat::zero(ker.rows, img.cols + ker.cols);
      for (int r = 0; r < ker.rows; ++r) {
        for (int c = 0; c < img.cols; ++c) cat.at(r, c) = img.at(r, c);
        for (int c = 0; c < ker.cols; ++c) cat.at(r, img.cols + c) = ker.at(r, c);
      }
      FqMat red = cat;
      auto piv = fq_rref(red, q);
      std::vector<int> comp;
      for (int p : piv)
        if (p >= img.cols) comp.push_back(p - img.cols);
      FqMat hb = FqMat::zero((int)keep[v].size(), (int)comp.size());
      for (int c = 0; c < (int)comp.size(); ++c)
        for (int r = 0; r < ker.rows; ++r) hb.at(r, c) = ker.at(r, comp[c]);
      hbasis[v] = std::move(hb);
      ibasis[v] = std::move(img);
    }

    FqRep H;
    H.q = q;
    H.n = n;
    H.dims.resize(n);
    for (int v = 1; v <= n; ++v) H.dims[v - 1] = hbasis[v].cols;
    for (int v = 2; v <= n; ++v) {
      // arrow v -> v-1 is the slot inclusion; express images in the (image |
      // homology) spanning set of the lower vertex and keep the homology part
      FqMat m = FqMat::zero(H.dims[v - 2], H.dims[v - 1]);
      int rows_dn = (int)keep[v - 1].size();
      FqMat span = FqMat::zero(rows_dn, ibasis[v - 1].cols + hbasis[v - 1].cols);
      for (int r = 0; r < rows_dn; ++r) {
        for (int c = 0; c < ibasis[v - 1].cols; ++c) span.at(r, c) = ibasis[v - 1].at(r, c);
        for (int c = 0; c < hbasis[v - 1].cols; ++c)
          span.at(r, ibasis[v - 1].cols + c) = hbasis[v - 1].at(r, c);
      }
      std::vector<int> pos_dn((int)g.size(), -1);
      for (int t = 0; t < rows_dn; ++t) pos_dn[keep[v - 1][t]] = t;
      for (int c = 0; c < hbasis[v].cols; ++c) {
        std::vector<int> w(rows_dn, 0);
        for (int r = 0; r < (int)keep[v].size(); ++r)
          w[pos_dn[keep[v][r]]] = hbasis[v].at(r, c);
        auto sol = fq_solve(span, w, q);
        if (!sol) throw std::logic_error("homology arrow image escapes the kernel");
        for (int r = 0; r < hbasis[v - 1].cols; ++r)
          m.at(r, c) = (*sol)[ibasis[v - 1].cols + r];
      }
      H.maps.push_back(std::move(m));
    }
    for (const auto& [ij, mult] : krull_schmidt(H)) {
      Indec m(ij.first, ij.second, -k);
      out[m] += mult;
    }
  }
  return out;
}

}  // namespace fqdetail

// derived Hall pairing at L = q: [x].[y] = q^{-(y,x)_{<=0}} * sum over classes
// xi in Hom^1(y, x) of [cone of xi[-1]: y[-1] -> x].  Shifts allowed; for
// shift-0 classes this agrees with fq_hall_product.
inline HallDist hall_pair(long long q, int n, const ObjClass& x, const ObjClass& y) {
  struct Key {
    long long q;
    int n;
    ObjClass x, y;
    bool operator<(const Key& o) const {
      return std::tie(q, n, x, y) < std::tie(o.q, o.n, o.x, o.y);
    }
  };
  static std::map<Key, HallDist> cache;
  static std::mutex cache_mx;
  Key key{q, n, x, y};
  {
    std::lock_guard<std::mutex> lk(cache_mx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  using namespace fqdetail;
  ProjComplex PX = proj_complex(q, n, x);
  ProjComplex PY1 = pc_shift(proj_complex(q, n, y), -1);
  ChainMapSpace S = chain_maps(PY1, PX);

  // the class count must match the graded-hom calculus
  long long hom1 = 0;
  for (const auto& [d, dim] : class_hom(y, x))
    if (d == 1) hom1 = dim;
  if (S.basis.cols - S.boundary_rank != hom1)
    throw std::logic_error("chain-map class count disagrees with hom calculus");

  std::map<ObjClass, long long> bucket;
  std::vector<int> coord(S.basis.cols, 0);
  do {
    std::map<int, FqMat> f;
    for (int vi = 0; vi < (int)S.vars.size(); ++vi) {
      long long acc = 0;
      for (int c = 0; c < S.basis.cols; ++c) acc += (long long)S.basis.at(vi, c) * coord[c];
      int val = fq_norm(acc, q);
      if (!val) continue;
      auto [k, src, tgt] = S.vars[vi];
      auto it = f.find(k);
      if (it == f.end())
        it = f.emplace(k, FqMat::zero((int)PX.gens_at(k).size(), (int)PY1.gens_at(k).size()))
                 .first;
      it->second.at(tgt, src) = val;
    }
    ++bucket[pc_homology_class(pc_cone(PY1, PX, f))];
  } while (fq_next(coord, q));

  BigInt cosets = bigint_pow(q, S.boundary_rank);
  BigRat weight = bigrat_pow(BigRat(q), (int)-truncated_pairing(y, x, 0));
  HallDist out;
  for (const auto& [cls, count] : bucket) {
    if (count % cosets != 0)
      throw std::logic_error("cone class not constant on homotopy classes");
    hall_dist_add(out, cls, BigRat(BigInt(count) / cosets) * weight);
  }
  {
    std::lock_guard<std::mutex> lk(cache_mx);
    cache.emplace(std::move(key), out);
  }
  return out;
}

// bilinear extension of hall_pair to distributions
inline HallDist hall_pair_mul(long long q, int n, const HallDist& x, const HallDist& y) {
  HallDist out;
  for (const auto& [cx, wx] : x)
    for (const auto& [cy, wy] : y)
      for (const auto& [cls, w] : hall_pair(q, n, cx, cy))
        hall_dist_add(out, cls, w * wx * wy);
  return out;
}

}  // namespace wallx
