#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "wallx/intlinalg.hpp"

namespace wallx {

struct RootViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LatticeMap {
  int source_rank = 0;
  int target_rank = 0;
  IntMat matrix;  // target_rank x source_rank

  LatticeMap() = default;
  LatticeMap(int sr, int tr, IntMat m) : source_rank(sr), target_rank(tr), matrix(std::move(m)) {
    if ((int)matrix.size() != target_rank) throw std::invalid_argument("LatticeMap row count");
    for (auto& row : matrix)
      if ((int)row.size() != source_rank) throw std::invalid_argument("LatticeMap column count");
  }

  IntVec apply(const IntVec& v) const { return mat_apply(matrix, v); }
};

struct GroupoidMorphism {
  int src = 0;
  int tgt = 0;
  IntVec vec;

  friend bool operator==(const GroupoidMorphism& a, const GroupoidMorphism& b) {
    return a.src == b.src && a.tgt == b.tgt && a.vec == b.vec;
  }
  friend bool operator<(const GroupoidMorphism& a, const GroupoidMorphism& b) {
    return std::tie(a.src, a.tgt, a.vec) < std::tie(b.src, b.tgt, b.vec);
  }
};

// nonempty hom-set = coset base + ker(phi) basis
struct HomSet {
  IntVec base;
  std::vector<IntVec> kernel;
};

struct InducedGroupoid {
  LatticeMap phi;
  std::vector<IntVec> objects;
  std::vector<std::vector<std::optional<HomSet>>> hom_cache;  // [i][j]

  int size() const { return (int)objects.size(); }

  const std::optional<HomSet>& hom(int i, int j) const { return hom_cache[i][j]; }

  bool contains(const GroupoidMorphism& g) const {
    if (g.src < 0 || g.src >= size() || g.tgt < 0 || g.tgt >= size()) return false;
    IntVec want(phi.target_rank);
    for (int k = 0; k < phi.target_rank; ++k) want[k] = objects[g.tgt][k] - objects[g.src][k];
    return phi.apply(g.vec) == want;
  }

  // all morphisms i -> j with kernel coefficients in [-box, box]
  std::vector<GroupoidMorphism> enumerate(int i, int j, int box) const {
    std::vector<GroupoidMorphism> out;
    const auto& h = hom_cache[i][j];
    if (!h) return out;
    std::vector<int> c(h->kernel.size(), -box);
    while (true) {
      IntVec v = h->base;
      for (size_t k = 0; k < h->kernel.size(); ++k)
        for (size_t t = 0; t < v.size(); ++t) v[t] += (long long)c[k] * h->kernel[k][t];
      out.push_back({i, j, v});
      size_t k = 0;
      for (; k < c.size(); ++k) {
        if (c[k] < box) { ++c[k]; break; }
        c[k] = -box;
      }
      if (k == c.size()) break;
      if (c.empty()) break;
    }
    return out;
  }
};

inline InducedGroupoid make_induced_groupoid(const LatticeMap& phi, std::vector<IntVec> objects) {
  for (auto& o : objects)
    if ((int)o.size() != phi.target_rank) throw std::invalid_argument("object rank mismatch");
  for (size_t a = 0; a < objects.size(); ++a)
    for (size_t b = a + 1; b < objects.size(); ++b)
      if (objects[a] == objects[b]) throw std::invalid_argument("objects must be distinct");
  InducedGroupoid g;
  g.phi = phi;
  g.objects = std::move(objects);
  int n = g.size();
  g.hom_cache.assign(n, std::vector<std::optional<HomSet>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      IntVec b(phi.target_rank);
      for (int k = 0; k < phi.target_rank; ++k) b[k] = g.objects[j][k] - g.objects[i][k];
      auto sol = solve_lattice(phi.matrix, b, phi.source_rank);
      if (sol) g.hom_cache[i][j] = HomSet{sol->particular, sol->kernel};
    }
  return g;
}

inline std::optional<GroupoidMorphism> compose(const GroupoidMorphism& g1, const GroupoidMorphism& g2) {
  if (g1.tgt != g2.src) return std::nullopt;  // NonComposable
  GroupoidMorphism r;
  r.src = g1.src;
  r.tgt = g2.tgt;
  r.vec = g1.vec;
  for (size_t k = 0; k < r.vec.size(); ++k) r.vec[k] += g2.vec[k];
  return r;
}

// degree value in Gamma_V = (kernel coordinates) + (object-indicator W part)
struct DegreeVec {
  IntVec f;  // coordinates in the kernel basis of the morphism's component
  IntVec w;  // e_tgt - e_src over all objects

  friend bool operator==(const DegreeVec& a, const DegreeVec& b) { return a.f == b.f && a.w == b.w; }
  DegreeVec operator+(const DegreeVec& o) const {
    DegreeVec r = *this;
    for (size_t k = 0; k < r.f.size(); ++k) r.f[k] += o.f[k];
    for (size_t k = 0; k < r.w.size(); ++k) r.w[k] += o.w[k];
    return r;
  }
};

// w part must be e_j - e_k or 0
inline void check_root_condition(const DegreeVec& d) {
  int pos = 0, neg = 0, bad = 0;
  for (long long x : d.w) {
    if (x == 1) ++pos;
    else if (x == -1) ++neg;
    else if (x != 0) ++bad;
  }
  bool ok = bad == 0 && ((pos == 0 && neg == 0) || (pos == 1 && neg == 1));
  if (!ok) throw RootViolation("degree w-part outside the root set R_V");
}

struct GradingLattice {
  const InducedGroupoid* g = nullptr;
  std::vector<int> component;      // object -> component id
  std::vector<int> skeleton;       // component -> object index
  std::vector<IntVec> eta;         // object -> chosen morphism vector skeleton(comp(i)) -> i
  std::vector<IntVec> kernel;      // basis of ker(phi)

  int rank() const {
    int comps = (int)skeleton.size();
    return (int)kernel.size() * comps + (g->size() - comps);
  }

  // F(gamma: i->j) = eta_i + vec - eta_j, expressed in the kernel basis
  IntVec f_of(const GroupoidMorphism& m) const {
    IntVec v = eta[m.src];
    for (size_t k = 0; k < v.size(); ++k) v[k] += m.vec[k] - eta[m.tgt][k];
    if (kernel.empty()) {
      for (long long x : v)
        if (x != 0) throw std::logic_error("nonzero F with trivial kernel");
      return {};
    }
    // solve kernel-matrix * c = v
    IntMat km(v.size(), IntVec(kernel.size()));
    for (size_t r = 0; r < v.size(); ++r)
      for (size_t c = 0; c < kernel.size(); ++c) km[r][c] = kernel[c][r];
    auto sol = solve_lattice(km, v);
    if (!sol) throw std::logic_error("F value not in kernel lattice");
    return sol->particular;
  }

  DegreeVec degree(const GroupoidMorphism& m) const {
    DegreeVec d;
    d.f = f_of(m);
    d.f.resize(kernel.size(), 0);
    d.w.assign(g->size(), 0);
    d.w[m.tgt] += 1;
    d.w[m.src] -= 1;
    check_root_condition(d);
    return d;
  }
};

inline GradingLattice grading_lattice(const InducedGroupoid& g,
                                      std::optional<std::vector<int>> skeleton_choice = std::nullopt) {
  GradingLattice gl;
  gl.g = &g;
  int n = g.size();
  // connected components along nonempty hom-sets
  gl.component.assign(n, -1);
  int comps = 0;
  for (int i = 0; i < n; ++i) {
    if (gl.component[i] >= 0) continue;
    std::vector<int> stack{i};
    gl.component[i] = comps;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < n; ++b)
        if (gl.component[b] < 0 && (g.hom(a, b) || g.hom(b, a))) {
          gl.component[b] = comps;
          stack.push_back(b);
        }
    }
    ++comps;
  }
  // skeleton: default lexicographically least object per component
  gl.skeleton.assign(comps, -1);
  if (skeleton_choice) {
    if ((int)skeleton_choice->size() != comps) throw std::invalid_argument("skeleton size mismatch");
    for (int c = 0; c < comps; ++c) {
      int s = (*skeleton_choice)[c];
      if (gl.component[s] != c) throw std::invalid_argument("skeleton object in wrong component");
      gl.skeleton[c] = s;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      int c = gl.component[i];
      if (gl.skeleton[c] < 0 || g.objects[i] < g.objects[gl.skeleton[c]]) gl.skeleton[c] = i;
    }
  }
  // eta_i: skeleton -> i base morphisms
  gl.eta.assign(n, IntVec(g.phi.source_rank, 0));
  for (int i = 0; i < n; ++i) {
    int s = gl.skeleton[gl.component[i]];
    const auto& h = g.hom(s, i);
    if (!h) throw std::logic_error("skeleton not connected to its component member");
    gl.eta[i] = h->base;
  }
  // kernel basis from any hom-set (they all share ker phi); compute directly
  auto sol = solve_lattice(g.phi.matrix, IntVec(g.phi.target_rank, 0), g.phi.source_rank);
  gl.kernel = sol->kernel;
  // assert the root condition on all cached hom base points
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (g.hom(i, j)) gl.degree({i, j, g.hom(i, j)->base});
  return gl;
}

// ---- cocycles ----------------------------------------------------------

struct Cocycle {
  enum Kind { constant_one, bilinear_sign, explicit_table } kind = constant_one;
  IntMat pairing;  // antisymmetric, on kernel (F) coordinates; bilinear_sign only
  std::map<std::pair<GroupoidMorphism, GroupoidMorphism>, int> table;  // explicit_table only

  static Cocycle one() { return {}; }
  static Cocycle bilinear(IntMat p) {
    Cocycle c;
    c.kind = bilinear_sign;
    c.pairing = std::move(p);
    return c;
  }

  // sign on a composable pair; 0 when non-composable
  int eval(const GradingLattice& gl, const GroupoidMorphism& a, const GroupoidMorphism& b) const {
    if (a.tgt != b.src) return 0;
    switch (kind) {
      case constant_one:
        return 1;
      case bilinear_sign: {
        IntVec fa = gl.f_of(a), fb = gl.f_of(b);
        long long s = 0;
        for (size_t i = 0; i < fa.size(); ++i)
          for (size_t j = 0; j < fb.size(); ++j) s += fa[i] * pairing[i][j] * fb[j];
        return (s % 2 == 0) ? 1 : -1;
      }
      case explicit_table: {
        auto it = table.find({a, b});
        return it == table.end() ? 1 : it->second;  // normalized default
      }
    }
    return 0;
  }
};

struct CocycleCounterexample {
  GroupoidMorphism g1, g2, g3;
};

// checks sigma(g1,g2) sigma(g1+g2,g3) == sigma(g1,g2+g3) sigma(g2,g3) on all
// composable triples within the enumeration box
inline std::optional<CocycleCounterexample> check_cocycle(const InducedGroupoid& g, const Cocycle& s,
                                                          int box) {
  GradingLattice gl = grading_lattice(g);
  int n = g.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (auto& g1 : g.enumerate(i, j, box))
            for (auto& g2 : g.enumerate(j, k, box))
              for (auto& g3 : g.enumerate(k, l, box)) {
                auto g12 = compose(g1, g2);
                auto g23 = compose(g2, g3);
                long long lhs = (long long)s.eval(gl, g1, g2) * s.eval(gl, *g12, g3);
                long long rhs = (long long)s.eval(gl, g1, *g23) * s.eval(gl, g2, g3);
                if (lhs != rhs) return CocycleCounterexample{g1, g2, g3};
              }
  return std::nullopt;
}

// ---- ready-made instances ----------------------------------------------

// phi of the A_n root lattice: simple root u_k -> e_k - e_{k-1}; objects e_0..e_n
inline LatticeMap an_phi(int n) {
  IntMat m(n + 1, IntVec(n, 0));
  for (int k = 1; k <= n; ++k) {
    m[k][k - 1] = 1;
    m[k - 1][k - 1] = -1;
  }
  return LatticeMap(n, n + 1, m);
}

inline InducedGroupoid an_groupoid(int n) {
  std::vector<IntVec> objs;
  for (int i = 0; i <= n; ++i) {
    IntVec e(n + 1, 0);
    e[i] = 1;
    objs.push_back(e);
  }
  return make_induced_groupoid(an_phi(n), objs);
}

// u_{ij} as a root-lattice vector (i<j: sum of simple roots i+1..j; i>j: minus u_{ji})
inline IntVec an_root(int n, int i, int j) {
  IntVec v(n, 0);
  int a = std::min(i, j), b = std::max(i, j);
  for (int k = a + 1; k <= b; ++k) v[k - 1] = i < j ? 1 : -1;
  return v;
}

}  // namespace wallx
