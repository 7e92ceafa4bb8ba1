#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "dpfib/critical.hpp"
#include "dpfib/gf.hpp"
#include "dpfib/poly.hpp"

using namespace dpfib;

namespace {

RingPtr xyz() { return Ring::make({"x", "y", "z"}); }

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

}  // namespace

TEST_CASE("ring arithmetic and normalization") {
  const GF& F = GF::get(3, 1);
  auto R = xyz();
  Poly x = Poly::variable(R, F, 0), y = Poly::variable(R, F, 1);
  Poly f = x * x + y.scaled(2);
  Poly g = f - f;
  CHECK(g.is_zero());
  CHECK((x * x * x).degree_in(0) == 3);
  Poly three_x = x + x + x;  // 3x = 0 in characteristic 3
  CHECK(three_x.is_zero());
}

TEST_CASE("evaluation matches term-by-term computation") {
  const GF& F = GF::get(2, 3);
  auto R = xyz();
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    Poly f = random_poly_deg(R, F, 3, rng);
    Poly g = random_poly_deg(R, F, 2, rng);
    std::vector<felem> pt = {rng.uniform(F), rng.uniform(F), rng.uniform(F)};
    CHECK((f * g).eval(pt) == F.mul(f.eval(pt), g.eval(pt)));
    CHECK((f + g).eval(pt) == F.add(f.eval(pt), g.eval(pt)));
    CompiledPoly cf(f);
    CHECK(cf.eval(F, pt) == f.eval(pt));
    PowTable pw(F, std::max(1, cf.max_exponent()));
    CHECK(cf.eval(F, pw, pt) == f.eval(pt));
  }
}

TEST_CASE("formal derivative in positive characteristic") {
  auto R = xyz();
  SUBCASE("char 2: d(x^3)/dx = x^2, the 2xy part of d(x^2 y)/dx dies") {
    const GF& F = GF::get(2, 1);
    Poly x = Poly::variable(R, F, 0), y = Poly::variable(R, F, 1), z = Poly::variable(R, F, 2);
    CHECK(x.pow(3).derivative(0) == x * x);
    CHECK((x * x * y + x * z).derivative(0) == z);
  }
  SUBCASE("char 3: d(x^3)/dx = 0") {
    const GF& F = GF::get(3, 1);
    Poly x = Poly::variable(R, F, 0);
    CHECK(x.pow(3).derivative(0).is_zero());
  }
}

TEST_CASE("Leibniz rule on random products") {
  for (int p : {2, 3}) {
    const GF& F = GF::get(p, 2);
    auto R = xyz();
    Rng rng(23 + p);
    for (int t = 0; t < 25; ++t) {
      Poly f = random_poly_deg(R, F, 2, rng);
      Poly g = random_poly_deg(R, F, 2, rng);
      for (int v = 0; v < 3; ++v)
        CHECK((f * g).derivative(v) == f.derivative(v) * g + f * g.derivative(v));
    }
  }
}

TEST_CASE("p-th power stripping") {
  SUBCASE("char 2: x^4 + xy -> xy") {
    const GF& F = GF::get(2, 1);
    auto R = xyz();
    Poly x = Poly::variable(R, F, 0), y = Poly::variable(R, F, 1);
    CHECK((x.pow(4) + x * y).stripped_pth_powers() == x * y);
  }
  SUBCASE("char 3: x^3 y^3 + x^2 y -> x^2 y") {
    const GF& F = GF::get(3, 1);
    auto R = xyz();
    Poly x = Poly::variable(R, F, 0), y = Poly::variable(R, F, 1);
    CHECK((x.pow(3) * y.pow(3) + x * x * y).stripped_pth_powers() == x * x * y);
  }
  SUBCASE("idempotent, no all-divisible monomial survives, critical sets agree") {
    const GF& F = GF::get(2, 2);
    auto R = xyz();
    Rng rng(77);
    for (int t = 0; t < 10; ++t) {
      Poly f = random_poly_deg(R, F, 4, rng);
      Poly s = f.stripped_pth_powers();
      CHECK(s == s.stripped_pth_powers());
      for (auto& [m, c] : s.terms()) {
        bool all_div = true;
        for (auto e : m.exps) all_div = all_div && (e % F.p() == 0);
        CHECK(!all_div);
      }
      // the removed part is a square, so the exhaustive censuses agree
      auto c1 = critical_points_census(f);
      auto c2 = critical_points_census(s);
      CHECK(c1 == c2);
    }
  }
}

TEST_CASE("substitution and translation") {
  const GF& F = GF::get(2, 3);
  auto R = xyz();
  Rng rng(3);
  Poly f = random_poly_deg(R, F, 3, rng);
  std::vector<felem> shift = {3, 5, 1};
  Poly g = f.translated(shift);
  for (int t = 0; t < 20; ++t) {
    std::vector<felem> pt = {rng.uniform(F), rng.uniform(F), rng.uniform(F)};
    std::vector<felem> moved = pt;
    for (int i = 0; i < 3; ++i) moved[i] = F.add(pt[i], shift[i]);
    CHECK(g.eval(pt) == f.eval(moved));
  }
  Poly cap = f.translated(shift, 2);
  for (auto& [m, c] : cap.terms()) CHECK(m.degree() < 2);
}

TEST_CASE("grammar round trip and fixed formatting") {
  const GF& F = GF::get(2, 3);
  auto R = Ring::make({"u0", "u1", "x", "y"});
  Poly f = Poly::parse(R, F, "x^2*y + g^3*u0*u1 + 1");
  CHECK(f.term_count() == 3);
  CHECK(Poly::parse(R, F, f.str()) == f);
  // canonical form always prints an explicit coefficient
  Poly x2y = Poly::parse(R, F, "x^2*y");
  CHECK(x2y.str() == "1*x^2*y");
  // integers reduce into the field: 2 = 0 in characteristic 2
  CHECK(Poly::parse(R, F, "2*x").is_zero());
  CHECK(Poly::parse(R, F, "-1*x") == Poly::parse(R, F, "x"));
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    Poly g = random_poly_deg(R, GF::get(3, 2), 3, rng);
    CHECK(Poly::parse(R, GF::get(3, 2), g.str()) == g);
  }
}

TEST_CASE("coefficient embedding into an extension") {
  const GF& F = GF::get(3, 1);
  const GF& E = GF::get(3, 2);
  auto R = xyz();
  Rng rng(4);
  Poly f = random_poly_deg(R, F, 3, rng);
  Poly g = f.mapped_into(E);
  const auto& emb = F.embedding_into(E);
  for (int t = 0; t < 10; ++t) {
    std::vector<felem> pt = {rng.uniform(F), rng.uniform(F), rng.uniform(F)};
    std::vector<felem> ept = {emb[pt[0]], emb[pt[1]], emb[pt[2]]};
    CHECK(g.eval(ept) == emb[f.eval(pt)]);
  }
}
