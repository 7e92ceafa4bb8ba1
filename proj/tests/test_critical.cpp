#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "dpfib/critical.hpp"

using namespace dpfib;

namespace {

RingPtr vars(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return Ring::make(names);
}

Poly random_poly_deg(RingPtr ring, const GF& F, int max_deg, Rng& rng) {
  Poly f(ring, F);
  int n = ring->nvars();
  std::function<void(int, int, Monomial&)> rec = [&](int var, int left, Monomial& m) {
    if (var == n) {
      f.add_term(m, rng.uniform(F));
      return;
    }
    for (int e = 0; e <= left; ++e) {
      m.exps[var] = static_cast<std::uint8_t>(e);
      rec(var + 1, left - e, m);
    }
    m.exps[var] = 0;
  };
  Monomial m(n);
  rec(0, max_deg, m);
  return f;
}

// monomial-ideal staircase count: standard monomials below the cap
int staircase_length(const std::vector<Monomial>& gens, int nvars, int cap) {
  int count = 0;
  std::function<void(int, int, Monomial&)> rec = [&](int var, int left, Monomial& m) {
    if (var == nvars) {
      for (const auto& g : gens) {
        bool divisible = true;
        for (int v = 0; v < nvars; ++v)
          if (m.exps[v] < g.exps[v]) {
            divisible = false;
            break;
          }
        if (divisible) return;
      }
      ++count;
      return;
    }
    for (int e = 0; e <= left; ++e) {
      m.exps[var] = static_cast<std::uint8_t>(e);
      rec(var + 1, left - e, m);
    }
    m.exps[var] = 0;
  };
  Monomial m(nvars);
  rec(0, cap - 1, m);
  return count;
}

}  // namespace

TEST_CASE("census of the split quadric finds one nondegenerate point") {
  for (const GF* F : {&GF::get(2, 2), &GF::get(3, 1), &GF::get(2, 1)}) {
    auto R = vars(4);
    Poly f = Poly::parse(R, *F, "x1*x2 + x3*x4");
    auto recs = critical_points_census(f);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].point == std::vector<felem>{0, 0, 0, 0});
    CHECK(recs[0].cls == CritClass::Nondegenerate);
    CHECK(recs[0].hessian_rank == 4);
  }
}

TEST_CASE("almost nondegenerate normal form over GF(2)") {
  auto R = vars(3);
  const GF& F = GF::get(2, 1);
  Poly f = Poly::parse(R, F, "x1^2 + x2*x3 + x1^3");
  auto recs = critical_points_census(f);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].point == std::vector<felem>{0, 0, 0});
  CHECK(recs[0].cls == CritClass::AlmostNondegenerate);
  REQUIRE(recs[0].local_length.has_value());
  CHECK(*recs[0].local_length == 2);
}

TEST_CASE("positive-dimensional critical locus classifies degenerate") {
  auto R = vars(2);
  const GF& F = GF::get(3, 1);
  Poly f = Poly::parse(R, F, "x1^2");
  auto recs = critical_points_census(f);
  REQUIRE(recs.size() == 3);  // the line x1 = 0
  for (const auto& r : recs) CHECK(r.cls == CritClass::Degenerate);
}

TEST_CASE("classification of single points") {
  const GF& F2 = GF::get(2, 1);
  SUBCASE("nondegenerate") {
    auto R = vars(4);
    Poly f = Poly::parse(R, F2, "x1*x2 + x3*x4");
    std::vector<felem> origin(4, 0);
    auto rec = classify_critical_point(f, origin);
    CHECK(rec.cls == CritClass::Nondegenerate);
    CHECK(rec.hessian_rank == 4);
    CHECK(*rec.local_length == 1);
  }
  SUBCASE("length 2: Jacobian ideal (x1^2, x3, x2)") {
    auto R = vars(3);
    Poly f = Poly::parse(R, F2, "x1^2 + x2*x3 + x1^3");
    std::vector<felem> origin(3, 0);
    auto rec = classify_critical_point(f, origin);
    CHECK(rec.cls == CritClass::AlmostNondegenerate);
    CHECK(*rec.local_length == 2);
  }
  SUBCASE("cubic cone: length 4, degenerate") {
    auto R = vars(2);
    Poly f = Poly::parse(R, F2, "x1^3 + x2^3");
    std::vector<felem> origin(2, 0);
    auto rec = classify_critical_point(f, origin);
    CHECK(rec.cls == CritClass::Degenerate);
    CHECK(rec.hessian_rank == 0);
    REQUIRE(rec.local_length.has_value());
    CHECK(*rec.local_length == 4);
  }
  SUBCASE("noncritical points are reported as such") {
    auto R = vars(2);
    Poly f = Poly::parse(R, F2, "x1");
    std::vector<felem> origin(2, 0);
    CHECK(classify_critical_point(f, origin).cls == CritClass::NotCritical);
  }
}

TEST_CASE("truncated local length") {
  const GF& F = GF::get(2, 1);
  SUBCASE("generators (x1^2, x2, x3) give length 2") {
    auto R = vars(3);
    std::vector<Poly> gens = {Poly::parse(R, F, "x1^2"), Poly::parse(R, F, "x2"),
                              Poly::parse(R, F, "x3")};
    std::vector<felem> origin(3, 0);
    CHECK(*local_length_truncated(gens, origin, 8) == 2);
  }
  SUBCASE("the maximal ideal has length 1") {
    auto R = vars(4);
    std::vector<Poly> gens;
    for (int v = 0; v < 4; ++v) gens.push_back(Poly::variable(R, F, v));
    std::vector<felem> origin(4, 0);
    CHECK(*local_length_truncated(gens, origin, 8) == 1);
  }
  SUBCASE("monomial staircase oracle: (x1^2, x2^2) has length 4") {
    auto R = vars(2);
    std::vector<Poly> gens = {Poly::parse(R, F, "x1^2"), Poly::parse(R, F, "x2^2")};
    std::vector<felem> origin(2, 0);
    auto len = local_length_truncated(gens, origin, 8);
    REQUIRE(len.has_value());
    CHECK(*len == 4);
    std::vector<Monomial> mg = {Monomial::unit(2, 0, 2), Monomial::unit(2, 1, 2)};
    CHECK(*len == staircase_length(mg, 2, 8));
  }
  SUBCASE("random monomial ideals match the staircase count when finite") {
    Rng rng(12);
    auto R = vars(3);
    for (int t = 0; t < 20; ++t) {
      std::vector<Monomial> mg;
      std::vector<Poly> gens;
      for (int i = 0; i < 3; ++i) {
        Monomial m(3);
        m.exps[i] = static_cast<std::uint8_t>(1 + rng.below(3));
        if (rng.below(2)) m.exps[(i + 1) % 3] = static_cast<std::uint8_t>(rng.below(2));
        mg.push_back(m);
        Poly g(R, F);
        g.add_term(m, F.one());
        gens.push_back(g);
      }
      std::vector<felem> origin(3, 0);
      auto len = local_length_truncated(gens, origin, 8);
      int expect = staircase_length(mg, 3, 8);
      if (len) CHECK(*len == expect);
    }
  }
  SUBCASE("unstabilized dimension reports infinite") {
    auto R = vars(2);
    std::vector<Poly> gens = {Poly::parse(R, F, "x1")};  // quotient is k[[x2]]
    std::vector<felem> origin(2, 0);
    CHECK(!local_length_truncated(gens, origin, 8).has_value());
  }
  SUBCASE("cap below 2 is refused") {
    auto R = vars(2);
    std::vector<Poly> gens = {Poly::parse(R, F, "x1")};
    std::vector<felem> origin(2, 0);
    CHECK_THROWS(local_length_truncated(gens, origin, 1));
  }
}

TEST_CASE("hessian structure in characteristic 2") {
  const GF& F = GF::get(2, 3);
  auto R = vars(4);
  Rng rng(2024);
  for (int t = 0; t < 100; ++t) {
    Poly f = random_poly_deg(R, F, 3, rng);
    std::vector<felem> pt(4);
    for (auto& c : pt) c = rng.uniform(F);
    HessianMatrix H = hessian_at(f, pt);
    for (int i = 0; i < 4; ++i) CHECK(H.at(i, i) == 0);
    CHECK(H.rank(F) % 2 == 0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(H.at(i, j) == H.at(j, i));
  }
}

TEST_CASE("unit p-th-power multiples preserve the classification") {
  SUBCASE("split quadric against 1 + x1") {
    const GF& F = GF::get(2, 2);
    auto R = vars(4);
    Poly f = Poly::parse(R, F, "x1*x2 + x3*x4");
    Poly a = Poly::parse(R, F, "1 + x1");
    std::vector<felem> origin(4, 0);
    CHECK(unit_multiple_invariance_check(f, a, origin));
  }
  SUBCASE("identity unit") {
    const GF& F = GF::get(2, 1);
    auto R = vars(3);
    Poly f = Poly::parse(R, F, "x1^2 + x2*x3 + x1^3");
    Poly a = Poly::constant(R, F, 1);
    std::vector<felem> origin(3, 0);
    CHECK(unit_multiple_invariance_check(f, a, origin));
  }
  SUBCASE("100 random trials per characteristic") {
    for (int p : {2, 3}) {
      const GF& F = GF::get(p, 2);
      auto R = vars(3);
      Rng rng(555 + p);
      int trials = 0;
      while (trials < 100) {
        Poly f = random_poly_deg(R, F, 3, rng);
        Poly a = random_poly_deg(R, F, 1, rng);
        auto recs = critical_points_census(f);
        for (const auto& r : recs) {
          if (a.eval(r.point) == 0) continue;
          CHECK(unit_multiple_invariance_check(f, a, r.point));
          ++trials;
        }
      }
    }
  }
}

TEST_CASE("census is invariant under adding p-th powers") {
  for (int p : {2, 3}) {
    const GF& F = GF::get(p, 2);
    auto R = vars(3);
    Rng rng(808 + p);
    for (int t = 0; t < 100; ++t) {
      Poly f = random_poly_deg(R, F, 3, rng);
      Poly h = random_poly_deg(R, F, 1, rng);
      CHECK(critical_points_census(f) == critical_points_census(f + h.pow(p)));
    }
  }
}

TEST_CASE("nondegenerate equals length one across random censuses") {
  for (int p : {2, 3}) {
    const GF& F = GF::get(p, 1);
    Rng rng(31337 + p);
    for (int nv : {2, 3, 4}) {
      auto R = vars(nv);
      for (int t = 0; t < 15; ++t) {
        Poly f = random_poly_deg(R, F, p == 2 ? 4 : 3, rng);
        for (const auto& rec : critical_points_census(f)) {
          std::vector<Poly> partials;
          for (int v = 0; v < nv; ++v) partials.push_back(f.derivative(v));
          auto len = local_length_truncated(partials, rec.point, 8);
          CHECK((rec.cls == CritClass::Nondegenerate) == (len && *len == 1));
        }
      }
    }
  }
}

TEST_CASE("transverse-cusp condition checker") {
  SUBCASE("minimal witness passes in characteristic 2") {
    const GF& F = GF::get(2, 2);
    auto R = Ring::make({"u1", "x", "y"});
    Poly f = Poly::parse(R, F, "u1*x + x^2 + x*y + y^3");
    auto rep = check_condition_cusp(f, 1, 2);
    CHECK(rep.pass);
  }
  SUBCASE("missing linear slot fails the degree check") {
    const GF& F = GF::get(2, 2);
    auto R = Ring::make({"u1", "x", "y"});
    Poly f = Poly::parse(R, F, "x^2 + y^3");
    auto rep = check_condition_cusp(f, 1, 2);
    CHECK(!rep.pass);
    bool dega_failed = false;
    for (const auto& c : rep.checks)
      if (c.name == "deg-a-positive" && !c.pass) dega_failed = true;
    CHECK(dega_failed);
  }
  SUBCASE("nonzero constant y-cube coefficient is normalized away") {
    const GF& F = GF::get(2, 2);
    auto R = Ring::make({"u1", "x", "y"});
    Poly f = Poly::parse(R, F, "u1*x + x^2 + x*y + g*y^3");
    CHECK(check_condition_cusp(f, 1, 2).pass);
  }
  SUBCASE("stray term outside the shape fails decomposition") {
    const GF& F = GF::get(2, 2);
    auto R = Ring::make({"u1", "x", "y"});
    Poly f = Poly::parse(R, F, "u1*x + x^2 + x*y + y^3 + u1*y");
    auto rep = check_condition_cusp(f, 1, 2);
    CHECK(!rep.pass);
    CHECK(!rep.checks.empty());
    CHECK(rep.checks[0].name == "shape");
    CHECK(!rep.checks[0].pass);
  }
  SUBCASE("characteristic 3 shape with y^2") {
    const GF& F = GF::get(3, 1);
    auto R = Ring::make({"u1", "x", "y"});
    Poly f = Poly::parse(R, F, "u1*x + x^2 + x*y + y^2 + x^3");
    CHECK(check_condition_cusp(f, 1, 2).pass);
  }
  SUBCASE("char 2: a y^3-divisible residual needs x or a fourth power") {
    const GF& F = GF::get(2, 2);
    auto R = Ring::make({"u1", "x", "y"});
    // u1 * y^3 lands in the residual and violates the monomial law
    Poly f = Poly::parse(R, F, "u1*x + x^2 + x*y + y^3 + u1*y^3");
    auto rep = check_condition_cusp(f, 1, 2);
    CHECK(!rep.pass);
    bool ymon = false;
    for (const auto& c : rep.checks)
      if (c.name == "ycube-monomials" && !c.pass) ymon = true;
    CHECK(ymon);
  }
}

TEST_CASE("transverse-linear condition checker") {
  SUBCASE("minimal witness with two base variables") {
    const GF& F = GF::get(2, 2);
    auto R = Ring::make({"u1", "u2", "x", "y"});
    Poly f = Poly::parse(R, F, "u1*x + u2*y + x^2*y");
    auto rep = check_condition_linear(f, 2, 3);
    CHECK(rep.pass);
  }
  SUBCASE("repeated linear form fails the rank-2 criterion") {
    const GF& F = GF::get(2, 2);
    auto R = Ring::make({"u1", "u2", "x", "y"});
    Poly f = Poly::parse(R, F, "u1*x + u1*y + x^2*y");
    auto rep = check_condition_linear(f, 2, 3);
    CHECK(!rep.pass);
    bool ci = false;
    for (const auto& c : rep.checks)
      if (c.name == "ab-complete-intersection-nonsingular" && !c.pass) ci = true;
    CHECK(ci);
  }
  SUBCASE("characteristic 3") {
    const GF& F = GF::get(3, 1);
    auto R = Ring::make({"u1", "u2", "x", "y"});
    Poly f = Poly::parse(R, F, "u1*x + u2*y + x^2 + x*y^2");
    CHECK(check_condition_linear(f, 2, 3).pass);
  }
}
