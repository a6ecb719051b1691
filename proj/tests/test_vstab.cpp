#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wallx/vstab.hpp"

using namespace wallx;

namespace {

Rational R(long long n, long long d = 1) { return Rational(n, d); }

const Indec M01(0, 1, 0);
const Indec M12(1, 2, 0);
const Indec M02(0, 2, 0);

ObjClass one(const Indec& m) { return ObjClass{{m, 1}}; }
ObjClass two(const Indec& a, const Indec& b) { return ObjClass{{a, 1}, {b, 1}}; }

// case set predicted by the translate table; mirrors the region atlas
std::set<StabCase> translate_cases(const CoamoebaVerdict& v) {
  std::set<StabCase> out;
  if (!v.member) return out;
  if (v.a >= 1) out.insert(StabCase::I);
  if (v.b >= 1) out.insert(StabCase::II);
  if (v.sign > 0) {
    if (v.a + v.b <= -1) out.insert(StabCase::III);
    if (v.a == 0 && v.b == 0) out.insert(StabCase::All);
  } else {
    if (v.a + v.b <= 0) out.insert(StabCase::III);
  }
  return out;
}

}  // namespace

TEST_CASE("collection cells and shift duality") {
  VCollection V = build_an_collection(2);
  CHECK(V.n == 2);
  CHECK(V.groupoid.size() == 3);
  CHECK_THROWS_AS(build_an_collection(0), std::invalid_argument);

  CHECK(V.cell_contains(0, 1, M01));
  CHECK(V.cell_contains(1, 0, M01.shifted(1)));
  CHECK(V.cell_contains(0, 1, M01.shifted(2)));
  CHECK(V.cell_contains(1, 2, M12));
  CHECK(V.cell_contains(0, 2, M02));
  CHECK(V.cell_contains(2, 0, M02.shifted(-1)));
  CHECK_FALSE(V.cell_contains(0, 1, M01.shifted(1)));
  CHECK_FALSE(V.cell_contains(0, 2, M01));
  CHECK_FALSE(V.cell_contains(0, 0, M01));

  // the opposite cell is the shift of this one
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j) {
      if (i == j) continue;
      for (const Indec& b : {M01, M12, M02})
        for (int s = -2; s <= 2; ++s)
          CHECK(V.cell_contains(i, j, b.shifted(s)) ==
                V.cell_contains(j, i, b.shifted(s + 1)));
    }

  CHECK(V.cell_of(M01) == std::pair<int, int>{0, 1});
  CHECK(V.cell_of(M01.shifted(1)) == std::pair<int, int>{1, 0});
  CHECK(V.cell_of(M02.shifted(-1)) == std::pair<int, int>{2, 0});

  VCollection V1 = build_an_collection(1);
  CHECK(V1.cell_contains(0, 1, Indec(0, 1, 0)));
  CHECK(V1.cell_contains(1, 0, Indec(0, 1, 1)));
  CHECK_FALSE(V1.cell_contains(0, 2, Indec(0, 1, 0)));
}

TEST_CASE("collection class map respects composition") {
  VCollection V = build_an_collection(2);
  CHECK(V.epsilon(M01) == IntVec{-1, 1, 0});
  CHECK(V.epsilon(M01.shifted(1)) == IntVec{1, -1, 0});
  CHECK(V.epsilon(M01.shifted(2)) == IntVec{-1, 1, 0});
  IntVec sum = V.epsilon(M01);
  IntVec m12 = V.epsilon(M12);
  for (size_t k = 0; k < sum.size(); ++k) sum[k] += m12[k];
  CHECK(sum == V.epsilon(M02));
}

TEST_CASE("charge from vertex potential") {
  // f = (0, -1+i, 2i): arguments 3/4, 1/4, 1/2
  std::vector<GaussianRational> f{GaussianRational(0, 0), GaussianRational(-1, 1),
                                  GaussianRational(0, 2)};
  A2Charge c = charge_from_f(f);
  CHECK(c.theta[{0, 1}] == R(3, 4));
  CHECK(c.theta[{1, 2}] == R(1, 4));
  CHECK(c.theta[{0, 2}] == R(1, 2));
  REQUIRE(c.point.has_value());
  CHECK(c.point->alpha1() == R(-1, 4));
  CHECK(c.point->alpha2() == R(-1, 4));
  CHECK(c.point->alpha3() == R(-1, 2));

  // translation invariance of the differences
  std::vector<GaussianRational> g = f;
  for (auto& z : g) z += GaussianRational(5, -7);
  A2Charge ct = charge_from_f(g);
  CHECK(ct.theta == c.theta);

  // rotation by i shifts every phase by 1/2; z01 wraps past the principal
  // branch, and the lift restores the common sheet, leaving alphas unchanged
  std::vector<GaussianRational> h = f;
  for (auto& z : h) z = z * GaussianRational(0, 1);
  A2Charge cr = charge_from_f(h, {{{0, 1}, 1}});
  CHECK(cr.theta[{0, 1}] == R(3, 4) + R(1, 2));
  CHECK(cr.theta[{1, 2}] == R(1, 4) + R(1, 2));
  CHECK(cr.point->alpha1() == c.point->alpha1());
  CHECK(cr.point->alpha2() == c.point->alpha2());

  // lifts move a phase by full turns
  A2Charge cl = charge_from_f(f, {{{0, 1}, 1}});
  CHECK(cl.theta[{0, 1}] == R(3, 4) + R(2));
  CHECK(cl.point->alpha1() == c.point->alpha1() - R(2));

  CHECK_THROWS_AS(charge_from_f({GaussianRational(0, 0), GaussianRational(0, 0),
                                 GaussianRational(1, 0)}),
                  DegenerateF);
  CHECK_THROWS_AS(charge_from_f({GaussianRational(0, 0), GaussianRational(1, 2),
                                 GaussianRational(3, 0)}),
                  ExactnessUnavailable);
}

TEST_CASE("coamoeba membership") {
  CoamoebaVerdict base = coamoeba_member(a2_from_alphas(R(3, 10), R(3, 10)));
  CHECK(base.member);
  CHECK(base.a == 0);
  CHECK(base.b == 0);
  CHECK(base.sign == 1);

  CHECK_FALSE(coamoeba_member(a2_from_alphas(R(1, 2), R(-1, 2))).member);
  CHECK_FALSE(coamoeba_member(a2_from_alphas(R(0), R(0))).member);
  CHECK_FALSE(coamoeba_member(a2_from_alphas(R(6, 5), R(2, 5))).member);

  CoamoebaVerdict lower = coamoeba_member(a2_from_alphas(R(-3, 10), R(-1, 5)));
  CHECK(lower.member);
  CHECK(lower.sign == -1);
  CHECK(lower.a == 0);
  CHECK(lower.b == 0);

  CoamoebaVerdict up = coamoeba_member(a2_from_alphas(R(23, 10), R(12, 5)));
  CHECK(up.member);
  CHECK(up.sign == 1);
  CHECK(up.a == 1);
  CHECK(up.b == 1);

  CoamoebaVerdict red = coamoeba_member(a2_from_alphas(R(17, 10), R(-2, 5)));
  CHECK(red.member);
  CHECK(red.sign == -1);
  CHECK(red.a == 1);
  CHECK(red.b == 0);

  // open triangles: edges and vertices excluded
  CHECK_FALSE(coamoeba_member(a2_from_alphas(R(1, 2), R(1, 2))).member);
  CHECK_FALSE(coamoeba_member(a2_from_alphas(R(0), R(1, 2))).member);
}

TEST_CASE("stability case atlas") {
  CHECK(a2_classify(a2_from_alphas(R(3, 10), R(3, 10))) ==
        std::set<StabCase>{StabCase::All});
  CHECK(a2_classify(a2_from_alphas(R(-3, 10), R(-1, 5))) ==
        std::set<StabCase>{StabCase::III});
  CHECK(a2_classify(a2_from_alphas(R(6, 5), R(2, 5))) ==
        std::set<StabCase>{StabCase::I});

  // one witness per region of the atlas
  CHECK(a2_classify(a2_from_alphas(R(17, 10), R(-2, 5))) ==
        std::set<StabCase>{StabCase::I});
  CHECK(a2_classify(a2_from_alphas(R(-2, 5), R(17, 10))) ==
        std::set<StabCase>{StabCase::II});
  CHECK(a2_classify(a2_from_alphas(R(23, 10), R(12, 5))) ==
        std::set<StabCase>{StabCase::I, StabCase::II});
  CHECK(a2_classify(a2_from_alphas(R(-5, 2), R(9, 5))) ==
        std::set<StabCase>{StabCase::II, StabCase::III});
  CHECK(a2_classify(a2_from_alphas(R(9, 5), R(-5, 2))) ==
        std::set<StabCase>{StabCase::I, StabCase::III});

  // unrealizable charge with no admissible case
  CHECK(a2_classify(a2_from_alphas(R(-3, 10), R(1, 2))).empty());

  // dividing lines refuse
  CHECK_THROWS_AS(a2_classify(a2_from_alphas(R(1), R(1, 2))), BoundaryAmbiguity);
  CHECK_THROWS_AS(a2_classify(a2_from_alphas(R(1, 2), R(1, 2))), BoundaryAmbiguity);
}

TEST_CASE("filtration oracle on the standard slicing") {
  A2Point p{R(3, 4), R(1, 4), R(1, 2)};
  OracleReport rep = a2_hn_oracle(p, semistable_for_case(StabCase::III));
  CHECK(rep.pass);
  CHECK(rep.witness.empty());

  const HNResult& hn = rep.hn.at(M02);
  CHECK(hn.path == std::vector<int>{0, 1, 2});
  REQUIRE(hn.factors.size() == 2);
  CHECK(hn.factors[0].first == M01);
  CHECK(hn.factors[0].second == R(3, 4));
  CHECK(hn.factors[1].first == M12);
  CHECK(hn.factors[1].second == R(1, 4));

  // a semistable object is its own filtration
  const HNResult& hs = rep.hn.at(M01);
  CHECK(hs.factors.size() == 1);
  CHECK(hs.path == std::vector<int>{0, 1});

  // shift equivariance: two shifts translate phases, odd shifts flip the walk
  const HNResult& h2 = rep.hn.at(M02.shifted(2));
  CHECK(h2.path == std::vector<int>{0, 1, 2});
  CHECK(h2.factors[0].first == M01.shifted(2));
  CHECK(h2.factors[0].second == R(3, 4) + R(2));
  const HNResult& h1 = rep.hn.at(M02.shifted(1));
  CHECK(h1.path == std::vector<int>{2, 1, 0});
  CHECK(h1.factors[0].first == M01.shifted(1));

  // wrong assignments at the same point are rejected
  CHECK_FALSE(a2_hn_oracle(p, semistable_for_case(StabCase::All)).pass);
  CHECK_FALSE(a2_hn_oracle(p, semistable_for_case(StabCase::I)).pass);
  CHECK_FALSE(a2_hn_oracle(p, semistable_for_case(StabCase::II)).pass);
}

TEST_CASE("rotated filtrations") {
  // alpha1 > 1: M12 breaks into M02 and M01[1]
  A2Slicing red{a2_from_alphas(R(17, 10), R(-2, 5)), semistable_for_case(StabCase::I)};
  auto hn = a2_hn(red, M12);
  REQUIRE(hn.has_value());
  CHECK(hn->path == std::vector<int>{1, 0, 2});
  CHECK(hn->factors[0].first == M02);
  CHECK(hn->factors[1].first == M01.shifted(1));
  auto hn1 = a2_hn(red, M12.shifted(1));
  REQUIRE(hn1.has_value());
  CHECK(hn1->path == std::vector<int>{2, 0, 1});

  // alpha2 > 1: M01 breaks into M12[-1] and M02
  A2Slicing yellow{a2_from_alphas(R(-2, 5), R(17, 10)), semistable_for_case(StabCase::II)};
  auto hy = a2_hn(yellow, M01);
  REQUIRE(hy.has_value());
  CHECK(hy->path == std::vector<int>{0, 2, 1});
  CHECK(hy->factors[0].first == M12.shifted(-1));
  CHECK(hy->factors[1].first == M02);
  CHECK(hy->factors[0].second > hy->factors[1].second);

  // factors must themselves be semistable
  A2Slicing broken = red;
  broken.ss = {false, false, true};
  CHECK_FALSE(a2_hn(broken, M12).has_value());
}

TEST_CASE("classifier agrees with the oracle on a rational grid") {
  // 100 x 100 offsets (6i+3)/100 - 3 keep alpha1, alpha2 off the walls;
  // alpha3 hits a wall exactly on the anti-diagonals i+j+1 = 0 mod 50
  const std::array<StabCase, 4> cases{StabCase::All, StabCase::I, StabCase::II,
                                      StabCase::III};
  int boundary = 0, member_single = 0, member_double = 0;
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) {
      A2Point p = a2_from_alphas(R(6 * i + 3, 100) - R(3), R(6 * j + 3, 100) - R(3));
      std::set<StabCase> got;
      try {
        got = a2_classify(p);
      } catch (const BoundaryAmbiguity&) {
        ++boundary;
        CHECK((i + j + 1) % 50 == 0);
        continue;
      }
      std::set<StabCase> oracle_set;
      for (StabCase c : cases)
        if (a2_hn_oracle(p, semistable_for_case(c)).pass) oracle_set.insert(c);
      REQUIRE(got == oracle_set);

      CoamoebaVerdict v = coamoeba_member(p);
      if (v.member) {
        REQUIRE(got == translate_cases(v));
        REQUIRE(!got.empty());
        (got.size() == 1 ? member_single : member_double)++;
      }
    }
  CHECK(boundary > 0);
  CHECK(member_single > 0);
  CHECK(member_double > 0);
}

TEST_CASE("interval element basics") {
  A2Slicing grey{A2Point{R(0), R(3, 5), R(3, 10)}, semistable_for_case(StabCase::All)};
  std::vector<int> cutoff{2, 2};

  // empty interval is the identity
  IntervalElement id = interval_element(grey, R(1, 10), R(1, 10), 2, cutoff);
  CHECK(id.pieces.size() == 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j)
        CHECK(id.ent[i][j] == HallDist{{ObjClass{}, BigRat(1)}});
      else
        CHECK(id.ent[i][j].empty());
    }

  // a single ray gives a single block
  IntervalElement ray = interval_element(grey, R(1, 4), R(2, 5), 2, cutoff);
  CHECK(ray.ent[0][2] == HallDist{{one(M02), BigRat(1)}});
  CHECK(ray.ent[0][1].empty());
  CHECK(ray.ent[1][2].empty());
  CHECK(ray.ent[0][0] == HallDist{{ObjClass{}, BigRat(1)}});

  // endpoint on a support ray refuses
  CHECK_THROWS_AS(interval_element(grey, R(3, 10), R(1), 2, cutoff), EndpointPhase);
  // coincident support phases refuse
  A2Slicing degENERATE{A2Point{R(1, 4), R(1, 4), R(1, 2)},
                       semistable_for_case(StabCase::III)};
  CHECK_THROWS_AS(interval_element(degENERATE, R(0), R(1), 2, cutoff), BoundaryAmbiguity);
}

TEST_CASE("interval element chamber matrices") {
  std::vector<int> cutoff{2, 2};

  // alpha1 > 1 chamber: entry (1,2) carries the broken rotation
  A2Slicing red{A2Point{R(0), R(3, 2), R(6, 5)}, semistable_for_case(StabCase::I)};
  IntervalElement a2el = interval_element(red, R(9, 10), R(13, 10), 2, cutoff);
  HallDist expect12{{one(M12), BigRat(1)}, {two(M02, M01.shifted(1)), BigRat(1)}};
  CHECK(a2el.ent[1][2] == expect12);
  CHECK(a2el.ent[0][2] == HallDist{{one(M02), BigRat(1)}});
  CHECK(a2el.ent[1][0] == HallDist{{one(M01.shifted(1)), BigRat(1)}});
  CHECK(a2el.ent[0][1].empty());

  IntervalElement a3el = interval_element(red, R(9, 10), R(13, 10), 3, cutoff);
  HallDist expect12q3{{one(M12), BigRat(1, 2)}, {two(M02, M01.shifted(1)), BigRat(1, 4)}};
  CHECK(a3el.ent[1][2] == expect12q3);

  // alpha3 < 0 chamber: entry (0,2) regenerates the excluded class
  A2Slicing blue{A2Point{R(3, 4), R(1, 4), R(1, 2)}, semistable_for_case(StabCase::III)};
  IntervalElement bel = interval_element(blue, R(0), R(1), 2, cutoff);
  HallDist expect02{{one(M02), BigRat(1)}, {two(M01, M12), BigRat(1)}};
  CHECK(bel.ent[0][2] == expect02);
  CHECK(bel.ent[0][1] == HallDist{{one(M01), BigRat(1)}});
  CHECK(bel.ent[1][2] == HallDist{{one(M12), BigRat(1)}});

  // all-stable chamber over a full window carries the same total block
  A2Slicing grey{A2Point{R(0), R(3, 5), R(3, 10)}, semistable_for_case(StabCase::All)};
  IntervalElement gel = interval_element(grey, R(-1, 10), R(9, 10), 2, cutoff);
  CHECK(gel.ent[0][2] == expect02);
  CHECK(gel.ent[0][1] == HallDist{{one(M01), BigRat(1)}});
  CHECK(gel.ent[1][2] == HallDist{{one(M12), BigRat(1)}});
  for (int i = 0; i < 3; ++i) CHECK(gel.ent[i][i] == HallDist{{ObjClass{}, BigRat(1)}});

  // the same equality across the wall in the other chamber: full windows agree
  IntervalElement bfull = interval_element(blue, R(-1, 20), R(19, 20), 2, cutoff);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(bfull.ent[i][j] == gel.ent[i][j]);

  // but narrow windows see the ray configuration, not just the chamber
  A2Slicing grey2{A2Point{R(0), R(7, 20), R(3, 10)}, semistable_for_case(StabCase::All)};
  IntervalElement n1 = interval_element(grey, R(1, 10), R(2, 5), 2, cutoff);
  IntervalElement n2 = interval_element(grey2, R(1, 10), R(2, 5), 2, cutoff);
  CHECK(n1.ent[1][2].empty());
  CHECK_FALSE(n2.ent[1][2].empty());

  // identical narrow slivers across distant chambers
  A2Slicing magenta{a2_from_alphas(R(9, 5), R(-5, 2)), semistable_for_case(StabCase::I)};
  IntervalElement s1 = interval_element(red, R(-1, 20), R(1, 20), 2, cutoff);
  IntervalElement s2 = interval_element(magenta, R(-1, 20), R(1, 20), 2, cutoff);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(s1.ent[i][j] == s2.ent[i][j]);
  CHECK(s1.ent[0][1] == HallDist{{one(M01), BigRat(1)}});
}

TEST_CASE("interval element restricted mode") {
  A2Slicing blue{A2Point{R(3, 4), R(1, 4), R(1, 2)}, semistable_for_case(StabCase::III)};
  IntervalElement sym = interval_element_symbolic(blue, R(0), R(1));
  CHECK(sym.sym[0][1] == rho(M01));
  CHECK(sym.sym[1][2] == rho(M12));
  LaurentScalar punctured = LaurentScalar::L() - LaurentScalar(1);
  CHECK(sym.sym[0][2].coeff(M02) == punctured);

  // odd-shift chains compose through the flipped cells
  IntervalElement odd = interval_element_symbolic(blue, R(1), R(2));
  CHECK(odd.sym[1][0] == rho(M01.shifted(1)));
  CHECK(odd.sym[2][1] == rho(M12.shifted(1)));
  CHECK(odd.sym[2][0].coeff(M02.shifted(1)) == punctured);
}

TEST_CASE("wall-crossing concatenation") {
  std::vector<int> cutoff{2, 2};
  struct Probe {
    A2Slicing s;
    Rational t1, t2, t3;
  };
  A2Slicing red{A2Point{R(0), R(3, 2), R(6, 5)}, semistable_for_case(StabCase::I)};
  A2Slicing blue{A2Point{R(3, 4), R(1, 4), R(1, 2)}, semistable_for_case(StabCase::III)};
  A2Slicing grey{A2Point{R(0), R(3, 5), R(3, 10)}, semistable_for_case(StabCase::All)};
  A2Slicing deep{A2Point{R(0), R(-1, 2), R(-3, 10)}, semistable_for_case(StabCase::III)};

  std::vector<Probe> probes{
      {red, R(9, 10), R(11, 10), R(13, 10)},
      {red, R(9, 10), R(21, 20), R(13, 10)},
      {red, R(9, 10), R(5, 4), R(13, 10)},
      {blue, R(0), R(1, 2), R(1)},
      {blue, R(0), R(3, 5), R(1)},
      {blue, R(0), R(1, 8), R(1)},
      {grey, R(-1, 10), R(1, 10), R(9, 10)},
      {grey, R(-1, 10), R(2, 5), R(9, 10)},
      {grey, R(-1, 10), R(7, 10), R(9, 10)},
      {deep, R(-3, 5), R(-2, 5), R(2, 5)},
      {deep, R(-3, 5), R(-1, 5), R(2, 5)},
      {grey, R(-1, 10), R(9, 10), R(9, 10)},  // degenerate split
  };
  for (const auto& pr : probes)
    for (long long q : {2, 3}) {
      WcfReport rep = wcf_verify(pr.s, pr.t1, pr.t2, pr.t3, q, cutoff);
      CHECK_MESSAGE(rep.pass, rep.detail, " q=", q, " t2=", pr.t2.str());
    }

  // same identity under a tighter cutoff
  WcfReport tight = wcf_verify(red, R(9, 10), R(11, 10), R(13, 10), 2, {1, 1});
  CHECK(tight.pass);

  // the product entry is the frozen chamber value
  WcfReport rep = wcf_verify(red, R(9, 10), R(11, 10), R(13, 10), 2, cutoff);
  HallDist expect12{{one(M12), BigRat(1)}, {two(M02, M01.shifted(1)), BigRat(1)}};
  CHECK(rep.product[1][2] == expect12);

  CHECK_THROWS_AS(wcf_verify(grey, R(-1, 10), R(1, 2), R(11, 10), 2, cutoff),
                  std::domain_error);
  CHECK_THROWS_AS(wcf_verify(grey, R(1, 2), R(1, 10), R(9, 10), 2, cutoff),
                  std::invalid_argument);
}
