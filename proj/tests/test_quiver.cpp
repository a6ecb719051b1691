#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "wallx/quiver.hpp"

using namespace wallx;

namespace {

std::vector<Indec> basis(int n, int shift = 0) {
  std::vector<Indec> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j <= n; ++j) out.emplace_back(i, j, shift);
  return out;
}

Matrix<LaurentScalar> scale(const LaurentScalar& s, Matrix<LaurentScalar> m) {
  for (auto& row : m.e)
    for (auto& v : row) v = v * s;
  return m;
}

HallDist unit_dist(const ObjClass& cls) { return HallDist{{cls, BigRat(1)}}; }

ObjClass shift_class(const ObjClass& cls, int by) {
  ObjClass out;
  for (const auto& [m, mult] : cls) out[m.shifted(by)] = mult;
  return out;
}

const LaurentScalar Lm1 = LaurentScalar::L() - LaurentScalar(1);

}  // namespace

// ---- indecomposables and graded homs -----------------------------------------

TEST_CASE("Indec validation, shift, ordering") {
  CHECK_THROWS_AS(Indec(1, 1), std::domain_error);
  CHECK_THROWS_AS(Indec(2, 1), std::domain_error);
  CHECK_THROWS_AS(Indec(-1, 0), std::domain_error);
  CHECK(Indec(0, 2).shifted(3) == Indec(0, 2, 3));
  CHECK(Indec(0, 2).shifted(1).shifted(-1) == Indec(0, 2));
  CHECK(Indec(0, 1) < Indec(0, 2));
  CHECK(Indec(0, 2).str() == "M02");
  CHECK(Indec(1, 3, -2).str() == "M13[-2]");
}

TEST_CASE("graded hom dimensions between unshifted indecomposables") {
  // the canonical map M01 -> M02 in degree 0
  CHECK(hom_ext(Indec(0, 1), Indec(0, 2)) == std::map<int, int>{{0, 1}});
  // the extension class of M12 by M01 in degree 1
  CHECK(hom_ext(Indec(1, 2), Indec(0, 1)) == std::map<int, int>{{1, 1}});
  // no maps at all the other way
  CHECK(hom_ext(Indec(0, 1), Indec(1, 2)).empty());
  CHECK(hom_dim(Indec(0, 1), Indec(0, 2), 0) == 1);
  CHECK(hom_dim(Indec(0, 1), Indec(0, 2), 1) == 0);
  CHECK(hom_dim(Indec(1, 2), Indec(0, 1), 1) == 1);
}

TEST_CASE("shifting the arguments moves the degree by r - s") {
  CHECK(hom_ext(Indec(0, 1, 1), Indec(0, 1)) == std::map<int, int>{{1, 1}});
  CHECK(hom_ext(Indec(0, 1), Indec(0, 1, 1)) == std::map<int, int>{{-1, 1}});
  CHECK(hom_ext(Indec(1, 2, 2), Indec(0, 1, 2)) == std::map<int, int>{{1, 1}});
  CHECK(hom_ext(Indec(1, 2, 1), Indec(0, 1)) == std::map<int, int>{{2, 1}});
  // endomorphisms sit in degree 0 only
  CHECK(hom_ext(Indec(0, 3, 5), Indec(0, 3, 5)) == std::map<int, int>{{0, 1}});
}

TEST_CASE("the two hom patterns are mutually exclusive and shift-consistent") {
  for (const Indec& a : basis(4))
    for (const Indec& b : basis(4)) {
      bool deg0 = a.i <= b.i && b.i < a.j && a.j <= b.j;
      bool deg1 = b.i < a.i && a.i <= b.j && b.j < a.j;
      CHECK_FALSE((deg0 && deg1));
      auto t = hom_ext(a, b);
      CHECK(t.size() == (size_t)(deg0 + deg1));
      if (deg0) CHECK(t.at(0) == 1);
      if (deg1) CHECK(t.at(1) == 1);
      for (int r = -1; r <= 1; ++r)
        for (int s = -1; s <= 1; ++s) {
          auto ts = hom_ext(a.shifted(r), b.shifted(s));
          std::map<int, int> expect;
          for (const auto& [d, dim] : t) expect[d + r - s] = dim;
          CHECK(ts == expect);
        }
    }
}

// ---- cones --------------------------------------------------------------------

TEST_CASE("cone of the canonical degree-0 map") {
  CHECK(cone_of(Indec(0, 1), Indec(0, 2), ConeKind::alpha) == std::vector<Indec>{Indec(1, 2)});
  // generic indices keep both summands
  CHECK(cone_of(Indec(0, 2), Indec(1, 3), ConeKind::alpha) ==
        std::vector<Indec>{Indec(2, 3), Indec(0, 1, 1)});
  CHECK(cone_of(Indec(0, 1, 2), Indec(0, 2, 2), ConeKind::alpha) ==
        std::vector<Indec>{Indec(1, 2, 2)});
  // the identity map has a vanishing cone: both summands drop
  CHECK(cone_of(Indec(0, 2), Indec(0, 2), ConeKind::alpha).empty());
}

TEST_CASE("cone of the extension class") {
  CHECK(cone_of(Indec(1, 2), Indec(0, 1), ConeKind::beta) == std::vector<Indec>{Indec(0, 2)});
  CHECK(cone_of(Indec(1, 3), Indec(0, 2), ConeKind::beta) ==
        std::vector<Indec>{Indec(1, 2), Indec(0, 3)});
  CHECK(cone_of(Indec(1, 2, -1), Indec(0, 1, -1), ConeKind::beta) ==
        std::vector<Indec>{Indec(0, 2, -1)});
}

TEST_CASE("cone of the zero map splits") {
  CHECK(cone_of(Indec(0, 1), Indec(1, 2), ConeKind::zero) ==
        std::vector<Indec>{Indec(1, 2), Indec(0, 1, 1)});
  CHECK(cone_of(Indec(0, 2, 1), Indec(0, 1), ConeKind::zero) ==
        std::vector<Indec>{Indec(0, 1), Indec(0, 2, 2)});
}

TEST_CASE("requesting a morphism that does not exist") {
  CHECK_THROWS_AS(cone_of(Indec(0, 1), Indec(1, 2), ConeKind::alpha), NoSuchMorphism);
  CHECK_THROWS_AS(cone_of(Indec(0, 1), Indec(1, 2), ConeKind::beta), NoSuchMorphism);
  CHECK_THROWS_AS(cone_of(Indec(1, 2), Indec(0, 1), ConeKind::alpha), NoSuchMorphism);
  // shifts must match for the degree-0 map / degree-1 class to exist
  CHECK_THROWS_AS(cone_of(Indec(0, 1, 1), Indec(0, 2), ConeKind::alpha), NoSuchMorphism);
  CHECK_THROWS_AS(cone_of(Indec(1, 2), Indec(0, 1, 1), ConeKind::beta), NoSuchMorphism);
}

TEST_CASE("cone kinds agree with the graded hom calculus everywhere") {
  for (const Indec& a : basis(4))
    for (const Indec& b : basis(4)) {
      bool has_map = hom_dim(a, b, 0) == 1;
      bool has_ext = hom_dim(a, b, 1) == 1;
      if (has_map)
        CHECK_NOTHROW(cone_of(a, b, ConeKind::alpha));
      else
        CHECK_THROWS_AS(cone_of(a, b, ConeKind::alpha), NoSuchMorphism);
      if (has_ext)
        CHECK_NOTHROW(cone_of(a, b, ConeKind::beta));
      else
        CHECK_THROWS_AS(cone_of(a, b, ConeKind::beta), NoSuchMorphism);
    }
}

// ---- correspondence product ----------------------------------------------------

TEST_CASE("composable basis classes multiply to (L-1) times the composite") {
  auto p = corr_product(rho(Indec(0, 1)), rho(Indec(1, 2)));
  REQUIRE(p.terms.size() == 1);
  CHECK(p.coeff(Indec(0, 2)) == Lm1);
  // the opposite order has vanishing Ext and gives zero
  CHECK(corr_product(rho(Indec(1, 2)), rho(Indec(0, 1))).is_zero());
  // mismatched shifts give zero
  CHECK(corr_product(rho(Indec(0, 1, 1)), rho(Indec(1, 2))).is_zero());
  // matched shifts compose at that shift
  auto ps = corr_product(rho(Indec(0, 1, -1)), rho(Indec(1, 2, -1)));
  CHECK(ps.coeff(Indec(0, 2, -1)) == Lm1);
}

TEST_CASE("triple products in A_3 associate") {
  auto x = rho(Indec(0, 1)), y = rho(Indec(1, 2)), z = rho(Indec(2, 3));
  auto left = corr_product(corr_product(x, y), z);
  auto right = corr_product(x, corr_product(y, z));
  CHECK(left == right);
  CHECK(left.coeff(Indec(0, 3)) == Lm1 * Lm1);
}

TEST_CASE("bilinearity over sums and Laurent coefficients") {
  HallElement x;
  x.add_term(Indec(0, 1), LaurentScalar::power(2));
  x.add_term(Indec(0, 2), LaurentScalar(1));
  auto p = corr_product(x, rho(Indec(2, 3)));
  REQUIRE(p.terms.size() == 1);
  CHECK(p.coeff(Indec(0, 3)) == Lm1);
  auto pp = corr_product(x, rho(Indec(1, 2)));
  CHECK(pp.coeff(Indec(0, 2)) == LaurentScalar::power(2) * Lm1);
}

TEST_CASE("zero-coefficient pruning keeps elements canonical") {
  HallElement x;
  x.add_term(Indec(0, 1), LaurentScalar(1));
  x.add_term(Indec(0, 1), LaurentScalar(-1));
  CHECK(x.is_zero());
  CHECK(x == HallElement{});
  CHECK(x.str() == "0");
}

TEST_CASE("weight hook scales composites by L^{-nu}") {
  CorrWeight nu = [](int k, int i, int j) { return (j - k) + (i - i); };
  auto p = corr_product(rho(Indec(0, 1)), rho(Indec(1, 2)), nu);
  CHECK(p.coeff(Indec(0, 2)) == Lm1 * LaurentScalar::power(-2));
}

TEST_CASE("correspondence product associates on all shifted basis triples") {
  std::vector<Indec> all;
  for (int s = -1; s <= 1; ++s)
    for (const Indec& m : basis(3, s)) all.push_back(m);
  for (const Indec& a : all)
    for (const Indec& b : all)
      for (const Indec& c : all) {
        auto left = corr_product(corr_product(rho(a), rho(b)), rho(c));
        auto right = corr_product(rho(a), corr_product(rho(b), rho(c)));
        REQUIRE(left == right);
      }
}

// ---- matrix realization ---------------------------------------------------------

TEST_CASE("basis classes land in row i, column j") {
  auto m = integrate(rho(Indec(0, 2)), 2);
  REQUIRE(m.size == 3);
  CHECK(m.strictly_upper());
  CHECK(m.e[0][2] == LaurentScalar(1));
  CHECK(m.e[0][1].is_zero());
  CHECK(m.e[1][2].is_zero());

  HallElement x;
  x.add_term(Indec(0, 2), Lm1);
  CHECK(integrate(x, 2).e[0][2] == Lm1);
}

TEST_CASE("matrix realization errors") {
  CHECK_THROWS_AS(integrate(rho(Indec(0, 1, 1)), 2), ShiftedTerm);
  CHECK_THROWS_AS(integrate(rho(Indec(0, 3)), 2), std::domain_error);
}

TEST_CASE("product of composables realizes as (L-1) E_{02}") {
  auto m = integrate(corr_product(rho(Indec(0, 1)), rho(Indec(1, 2))), 2);
  auto e01 = integrate(rho(Indec(0, 1)), 2);
  auto e12 = integrate(rho(Indec(1, 2)), 2);
  CHECK(m.e[0][2] == Lm1);
  CHECK(m == scale(Lm1, mat_mul(e01, e12)));
}

TEST_CASE("the matrix realization is a twisted homomorphism on shift-0 bases") {
  // on variety-normalized classes: integrate(x*y) == (L-1) integrate(x) integrate(y);
  // equivalently x -> (L-1) integrate(x) is multiplicative
  for (int n = 1; n <= 3; ++n)
    for (const Indec& a : basis(n))
      for (const Indec& b : basis(n)) {
        auto lhs = integrate(corr_product(rho(a), rho(b)), n);
        auto rhs = scale(Lm1, mat_mul(integrate(rho(a), n), integrate(rho(b), n)));
        REQUIRE(lhs == rhs);
      }
}

// ---- charge grading --------------------------------------------------------------

TEST_CASE("phi sends u_ij to e_j - e_i") {
  CHECK(phi_map(IntVec{1, 1}) == IntVec{-1, 0, 1});
  CHECK(phi_of(Indec(0, 2), 2) == IntVec{-1, 0, 1});
  CHECK(phi_of(Indec(1, 2), 3) == IntVec{0, -1, 1, 0});
  CHECK(phi_map(IntVec{0, 0, 0}) == IntVec{0, 0, 0, 0});
}

TEST_CASE("phi is linear and kills u_01 + u_12 - u_02") {
  IntVec sum(3, 0);
  auto u01 = an_root(3, 0, 1), u12 = an_root(3, 1, 2), u02 = an_root(3, 0, 2);
  for (int t = 0; t < 3; ++t) sum[t] = u01[t] + u12[t] - u02[t];
  CHECK(phi_map(sum) == IntVec{0, 0, 0, 0});
  IntVec u01p12(3, 0);
  for (int t = 0; t < 3; ++t) u01p12[t] = u01[t] + u12[t];
  CHECK(phi_map(u01p12) == phi_of(Indec(0, 2), 3));
  CHECK(phi_map(u01p12) == IntVec{-1, 0, 1, 0});
}

// ---- finite-field representations -------------------------------------------------

TEST_CASE("rep_of builds the block sum with identity arrows") {
  auto r = rep_of(2, 2, {{Indec(0, 2), 1}, {Indec(1, 2), 1}});
  CHECK(r.dims == std::vector<int>{1, 2});
  REQUIRE(r.maps.size() == 1);
  CHECK(r.maps[0].rows == 1);
  CHECK(r.maps[0].cols == 2);
  CHECK(r.maps[0].at(0, 0) == 1);  // the M_{02} slot survives the arrow
  CHECK(r.maps[0].at(0, 1) == 0);  // the M_{12} slot dies at vertex 1
  CHECK_THROWS_AS(rep_of(2, 2, {{Indec(0, 1, 1), 1}}), ShiftedTerm);
  CHECK_THROWS_AS(rep_of(2, 1, {{Indec(0, 2), 1}}), std::domain_error);
}

TEST_CASE("krull_schmidt round-trips multiplicity vectors") {
  std::vector<ObjClass> classes = {
      {},
      {{Indec(0, 1), 1}},
      {{Indec(0, 1), 2}},
      {{Indec(0, 2), 1}, {Indec(1, 2), 1}},
      {{Indec(0, 1), 1}, {Indec(1, 2), 1}},
      {{Indec(0, 3), 2}, {Indec(1, 2), 1}, {Indec(2, 3), 3}},
  };
  for (long long q : {2, 3})
    for (const auto& cls : classes) {
      int n = 3;
      auto ks = krull_schmidt(rep_of(q, n, cls));
      ObjClass back;
      for (const auto& [ij, m] : ks) back[Indec(ij.first, ij.second)] = m;
      REQUIRE(back == cls);
    }
}

TEST_CASE("krull_schmidt sees through a non-split presentation") {
  // dims (1,1) with a nonzero arrow is M_{02}, with a zero arrow M_{01}+M_{12}
  FqRep r;
  r.q = 3;
  r.n = 2;
  r.dims = {1, 1};
  r.maps = {fqdetail::FqMat::zero(1, 1)};
  r.maps[0].at(0, 0) = 2;
  auto ks = krull_schmidt(r);
  REQUIRE(ks.size() == 1);
  CHECK(ks.at({0, 2}) == 1);
  r.maps[0].at(0, 0) = 0;
  ks = krull_schmidt(r);
  CHECK(ks.at({0, 1}) == 1);
  CHECK(ks.at({1, 2}) == 1);
}

// ---- extension counting oracle ------------------------------------------------------

TEST_CASE("counts over F_2 for the split pair") {
  auto c = fq_ext_count(2, Indec(1, 2), Indec(0, 1));
  CHECK(c.hom_count == 1);
  CHECK(c.ext_count == 2);
  CHECK(c.indec_cone_count == 1);
}

TEST_CASE("vanishing Ext the other way around") {
  for (long long q : {2, 3, 5}) {
    auto c = fq_ext_count(q, Indec(0, 1), Indec(1, 2));
    CHECK(c.ext_count == 1);
    CHECK(c.hom_count == 1);
    CHECK(c.indec_cone_count == 0);
  }
}

TEST_CASE("hom and ext counts match the graded calculus on all pairs") {
  for (long long q : {2, 3})
    for (const Indec& a : basis(3))
      for (const Indec& b : basis(3)) {
        auto c = fq_ext_count(q, a, b);
        CHECK(c.hom_count == bigint_pow(q, hom_dim(a, b, 0)));
        CHECK(c.ext_count == bigint_pow(q, hom_dim(a, b, 1)));
      }
}

TEST_CASE("specialized correspondence coefficients equal indecomposable-cone counts") {
  for (long long q : {2, 3, 5})
    for (const Indec& a : basis(3))
      for (const Indec& b : basis(3)) {
        auto p = corr_product(rho(a), rho(b));
        BigRat coeff = 0;
        if (!p.is_zero()) coeff = p.terms.begin()->second.specialize(q);
        // the product pairs a. with b: extensions of b by a
        auto c = fq_ext_count(q, b, a);
        REQUIRE(coeff == BigRat(c.indec_cone_count));
      }
}

TEST_CASE("a one-dimensional Ext group can still have no indecomposable cones") {
  // Ext^1(M_{13}, M_{02}) is one-dimensional but every nonzero class has
  // middle M_{12} + M_{03}; the correspondence product is zero accordingly
  for (long long q : {2, 3}) {
    auto c = fq_ext_count(q, Indec(1, 3), Indec(0, 2));
    CHECK(c.ext_count == q);
    CHECK(c.indec_cone_count == 0);
  }
  CHECK(corr_product(rho(Indec(0, 2)), rho(Indec(1, 3))).is_zero());
}

// ---- full Hall product oracle ---------------------------------------------------------

TEST_CASE("the split and non-split middles of M_01, M_12 appear with weight 1") {
  auto p = fq_hall_product(2, {{Indec(0, 1), 1}}, {{Indec(1, 2), 1}}, {2, 2});
  REQUIRE(p.size() == 2);
  CHECK(p.at(ObjClass{{Indec(0, 1), 1}, {Indec(1, 2), 1}}) == BigRat(1));
  CHECK(p.at(ObjClass{{Indec(0, 2), 1}}) == BigRat(1));
}

TEST_CASE("the zero object class is a two-sided identity") {
  ObjClass zero;
  ObjClass x{{Indec(0, 2), 1}, {Indec(0, 1), 1}};
  CHECK(fq_hall_product(2, x, zero, {2, 2}) == unit_dist(x));
  CHECK(fq_hall_product(2, zero, x, {2, 2}) == unit_dist(x));
  CHECK(fq_hall_product(2, zero, zero, {2, 2}) == unit_dist(zero));
}

TEST_CASE("self-extension of M_01 picks up the endomorphism weight") {
  auto p = fq_hall_product(2, {{Indec(0, 1), 1}}, {{Indec(0, 1), 1}}, {2, 2});
  REQUIRE(p.size() == 1);
  CHECK(p.at(ObjClass{{Indec(0, 1), 2}}) == BigRat(1, 2));
}

TEST_CASE("a hand-evaluated triple product") {
  // ([M01][M01])[M12] = q^{-1}[2 M01 + M12] + (q-1)(1+q^{-1})[M01 + M02]
  for (long long q : {2, 3}) {
    auto p2 = fq_hall_product(q, {{Indec(0, 1), 1}}, {{Indec(0, 1), 1}}, {2, 2});
    auto p = fq_hall_mul(q, p2, unit_dist({{Indec(1, 2), 1}}), {2, 2});
    REQUIRE(p.size() == 2);
    CHECK(p.at(ObjClass{{Indec(0, 1), 2}, {Indec(1, 2), 1}}) == BigRat(1, q));
    CHECK(p.at(ObjClass{{Indec(0, 1), 1}, {Indec(0, 2), 1}}) ==
          BigRat(q - 1) * (BigRat(1) + BigRat(1, q)));
  }
}

TEST_CASE("cutoff violations are reported, not truncated") {
  CHECK_THROWS_AS(fq_hall_product(2, {{Indec(0, 1), 2}}, {{Indec(0, 1), 1}}, {2, 2}),
                  CutoffExceeded);
  CHECK_THROWS_AS(fq_hall_product(2, {{Indec(0, 2), 1}}, {{Indec(1, 2), 2}}, {2, 2}),
                  CutoffExceeded);
}

TEST_CASE("associativity of the oracle Hall product within the cutoff") {
  std::vector<int> cut{2, 2};
  std::vector<ObjClass> cls = {
      {{Indec(0, 1), 1}}, {{Indec(1, 2), 1}}, {{Indec(0, 2), 1}}};
  for (long long q : {2, 3})
    for (const auto& x : cls)
      for (const auto& y : cls)
        for (const auto& z : cls) {
          auto dx = class_dims(x, 2), dy = class_dims(y, 2), dz = class_dims(z, 2);
          bool fits = true;
          for (int v = 0; v < 2; ++v)
            if (dx[v] + dy[v] + dz[v] > cut[v]) fits = false;
          if (!fits) continue;
          auto left = fq_hall_mul(q, fq_hall_product(q, x, y, cut), unit_dist(z), cut);
          auto right = fq_hall_mul(q, unit_dist(x), fq_hall_product(q, y, z, cut), cut);
          REQUIRE(left == right);
        }
}

// ---- automorphism counts ----------------------------------------------------------

TEST_CASE("automorphism group orders") {
  CHECK(aut_order(2, {{Indec(0, 1), 1}}) == 1);
  CHECK(aut_order(3, {{Indec(0, 1), 1}}) == 2);
  CHECK(aut_order(5, {{Indec(0, 1), 1}}) == 4);
  // GL_2(F_q) for a square: (q^2-1)(q^2-q)
  CHECK(aut_order(2, {{Indec(0, 1), 2}}) == 6);
  CHECK(aut_order(3, {{Indec(0, 1), 2}}) == 48);
  // M01 + M02: units^2 times the hom space M01 <- M02
  CHECK(aut_order(2, {{Indec(0, 1), 1}, {Indec(0, 2), 1}}) == 2);
  CHECK(aut_order(3, {{Indec(0, 1), 1}, {Indec(0, 2), 1}}) == 12);
  // shifted summands contribute no cross maps in degree 0
  CHECK(aut_order(3, {{Indec(0, 1), 1}, {Indec(0, 2, 1), 1}}) == 4);
}

TEST_CASE("truncated Euler pairing over all degrees up to the bound") {
  ObjClass m01{{Indec(0, 1), 1}}, m12{{Indec(1, 2), 1}};
  CHECK(truncated_pairing(m12, m01) == 0);   // only Ext^1, excluded at N=0
  CHECK(truncated_pairing(m12, m01, 1) == -1);
  CHECK(truncated_pairing(m01, m01) == 1);
  // shifts push hom spaces into negative degrees, which stay in range
  CHECK(truncated_pairing(m12, shift_class(m01, 1)) == 1);
  CHECK(truncated_pairing(shift_class(m01, 1), m01) == 0);
  CHECK(truncated_pairing(m01, shift_class(m01, 1)) == -1);
}

// ---- derived oracle -----------------------------------------------------------------

TEST_CASE("the derived pairing agrees with the module-level product at shift 0") {
  std::vector<ObjClass> cls = {
      {},
      {{Indec(0, 1), 1}},
      {{Indec(1, 2), 1}},
      {{Indec(0, 2), 1}},
      {{Indec(0, 1), 2}},
      {{Indec(0, 1), 1}, {Indec(1, 2), 1}},
  };
  for (long long q : {2, 3})
    for (const auto& x : cls)
      for (const auto& y : cls) {
        auto dx = class_dims(x, 2), dy = class_dims(y, 2);
        if (dx[0] + dy[0] > 2 || dx[1] + dy[1] > 2) continue;
        REQUIRE(hall_pair(q, 2, x, y) == fq_hall_product(q, x, y, {2, 2}));
      }
}

TEST_CASE("shifted factors produce shifted cones") {
  // [M12].[M02[1]]: the degree-1 classes are the pullbacks of M02 ->> M12,
  // whose cones are the kernel shifted into degree 1
  for (long long q : {2, 3}) {
    auto p = hall_pair(q, 2, {{Indec(1, 2), 1}}, {{Indec(0, 2, 1), 1}});
    REQUIRE(p.size() == 2);
    CHECK(p.at(ObjClass{{Indec(1, 2), 1}, {Indec(0, 2, 1), 1}}) == BigRat(1));
    CHECK(p.at(ObjClass{{Indec(0, 1, 1), 1}}) == BigRat(q - 1));
  }
}

TEST_CASE("a degree-0 hom contributes weight without extensions") {
  // [M01[1]].[M12]: no degree-1 classes, but (M12, M01[1])_{<=0} = 1
  for (long long q : {2, 3}) {
    auto p = hall_pair(q, 2, {{Indec(0, 1, 1), 1}}, {{Indec(1, 2), 1}});
    REQUIRE(p.size() == 1);
    CHECK(p.at(ObjClass{{Indec(1, 2), 1}, {Indec(0, 1, 1), 1}}) == BigRat(1, q));
  }
}

TEST_CASE("the zero object is a unit for the derived pairing too") {
  ObjClass a{{Indec(0, 2, -1), 1}, {Indec(1, 2), 2}};
  CHECK(hall_pair(2, 2, a, {}) == unit_dist(a));
  CHECK(hall_pair(2, 2, {}, a) == unit_dist(a));
}

TEST_CASE("the derived pairing is shift-equivariant") {
  std::vector<std::pair<ObjClass, ObjClass>> pairs = {
      {{{Indec(0, 1), 1}}, {{Indec(1, 2), 1}}},
      {{{Indec(1, 2), 1}}, {{Indec(0, 2, 1), 1}}},
      {{{Indec(0, 1, 1), 1}}, {{Indec(1, 2), 1}}},
  };
  for (const auto& [x, y] : pairs) {
    auto base = hall_pair(2, 2, x, y);
    for (int s : {-1, 1, 2}) {
      HallDist expect;
      for (const auto& [cls, w] : base) expect[shift_class(cls, s)] = w;
      REQUIRE(hall_pair(2, 2, shift_class(x, s), shift_class(y, s)) == expect);
    }
  }
}

TEST_CASE("derived pairing associativity across shifts") {
  std::vector<ObjClass> cls = {
      {{Indec(0, 1), 1}},
      {{Indec(1, 2), 1}},
      {{Indec(0, 2, 1), 1}},
      {{Indec(0, 1, 1), 1}},
  };
  for (const auto& x : cls)
    for (const auto& y : cls)
      for (const auto& z : cls) {
        auto left = hall_pair_mul(2, 2, hall_pair(2, 2, x, y), unit_dist(z));
        auto right = hall_pair_mul(2, 2, unit_dist(x), hall_pair(2, 2, y, z));
        REQUIRE(left == right);
      }
}

TEST_CASE("chain-map class counts match the graded hom calculus") {
  // hall_pair asserts #classes == q^{dim Hom^1} internally; driving it across
  // a grid of shifted pairs exercises the check at q = 2, 3
  for (long long q : {2, 3})
    for (int r = -1; r <= 1; ++r)
      for (int s = -1; s <= 1; ++s)
        for (const Indec& a : basis(2))
          for (const Indec& b : basis(2))
            CHECK_NOTHROW(hall_pair(q, 2, {{a.shifted(r), 1}}, {{b.shifted(s), 1}}));
}
