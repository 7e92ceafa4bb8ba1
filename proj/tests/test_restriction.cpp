#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "dpfib/linalg.hpp"
#include "dpfib/restriction.hpp"

using namespace dpfib;

TEST_CASE("jet spaces have the binomial dimension") {
  BundleSpec Q = surjectivity_bundle(1, 1, 0, 0);
  // chart dimension 3: jets of order k have C(3+k-1, 3) monomials
  CHECK(jet_space(Q, {0, 0}, 1).dim() == 1);
  CHECK(jet_space(Q, {0, 0}, 2).dim() == 4);
  CHECK(jet_space(Q, {0, 0}, 3).dim() == 10);
  CHECK(jet_space(Q, {0, 0}, 4).dim() == 20);
}

TEST_CASE("order-1 restriction is evaluation: rank one") {
  const GF& F = GF::get(2, 4);
  BundleSpec Q(1, {0, 0, 0}, {1, 1, 1});  // P^1 x P^2
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    Point p(Q.nvars());
    p[0] = rng.nonzero(F);
    p[1] = rng.uniform(F);
    p[Q.x_var(0)] = rng.nonzero(F);
    p[Q.x_var(1)] = rng.uniform(F);
    p[Q.x_var(2)] = rng.uniform(F);
    auto M = restriction_matrix(Q, F, {2, 4}, p, 1);
    CHECK(M.jet_dim == 1);
    CHECK(M.rank(F) == 1);
  }
}

TEST_CASE("rank never exceeds either dimension bound") {
  const GF& F = GF::get(3, 2);
  BundleSpec Q = surjectivity_bundle(1, 2, 1, 2);
  Point p(Q.nvars(), 0);
  p[0] = 1;
  p[Q.x_var(0)] = 1;
  auto M = restriction_matrix(Q, F, {3, 6}, p, 3);
  int rank = M.rank(F);
  CHECK(rank <= M.jet_dim);
  CHECK(rank <= static_cast<int>(M.rows.size()));
}

TEST_CASE("order-4 restriction of the degree-1 branch system is surjective on U_x") {
  // the (6mu, 6) system on the weight-(1,1,2) cover base with mu = 1
  const GF& F = GF::get(2, 4);
  BundleSpec Z = BundleSpec::over_base_of(3, {0, 0, 2}, {1, 1, 2});
  Rng rng(77);
  for (int t = 0; t < 5; ++t) {
    Point p(Z.nvars());
    p[0] = 1;
    p[1] = rng.uniform(F);
    p[Z.x_var(0)] = 1;
    p[Z.x_var(1)] = rng.uniform(F);
    p[Z.x_var(2)] = rng.uniform(F);
    auto M = restriction_matrix(Z, F, {6, 6}, p, 4);
    CHECK(M.rank(F) == M.jet_dim);
  }
}

TEST_CASE("surjectivity is invariant under moving the point to standard position") {
  const GF& F = GF::get(2, 4);
  BundleSpec Q = surjectivity_bundle(1, 1, 1, 2);
  Rng rng(99);
  for (int t = 0; t < 10; ++t) {
    Point p(Q.nvars());
    p[0] = rng.nonzero(F);
    p[1] = rng.uniform(F);
    p[Q.x_var(0)] = rng.nonzero(F);
    p[Q.x_var(1)] = rng.uniform(F);
    p[Q.x_var(2)] = rng.uniform(F);
    auto cc = move_point_to_standard(Q, F, p, 0);
    Point q = cc.apply(p);
    Bidegree bd{5, 4};
    auto M1 = restriction_matrix(Q, F, bd, p, 3);
    auto M2 = restriction_matrix(Q, F, bd, q, 3);
    CHECK(M1.rank(F) == M2.rank(F));
  }
}

TEST_CASE("explicit monomial families already span the jets") {
  // case-1 witness family at the standard point of U_x:
  // u_i u_j u0^{delta-2} x^d, u_i u0^{delta-l-1} x^{d-1} y,
  // u_i u0^{delta-mu-1} x^{d-m} z, ... restricted to order-3 jets
  const GF& F = GF::get(2, 4);
  int m = 1, d = 3;
  long lambda = 0, mu = 0, delta = 2;
  BundleSpec Q = surjectivity_bundle(1, m, lambda, mu);
  Point p(Q.nvars(), 0);
  p[0] = 1;
  p[Q.x_var(0)] = 1;
  auto js = jet_space(Q, {0, 0}, 3);
  std::map<Monomial, int> col;
  for (int c = 0; c < js.dim(); ++c) col[js.basis[c]] = c;
  auto coords = chart_coords(Q, F, p, {0, 0});
  REQUIRE(coords.has_value());

  std::vector<std::string> family = {
      "u0^2*x^3", "u0*u1*x^3", "u1^2*x^3",
      "u0^2*x^2*y", "u0*u1*x^2*y", "u0^2*x^2*z", "u0*u1*x^2*z",
      "u0^2*x*y^2", "u0^2*x*y*z", "u0^2*x*z^2"};
  std::vector<std::vector<felem>> rows;
  for (const auto& s : family) {
    Poly g = Poly::parse(Q.cox_ring(), F, s);
    REQUIRE(Q.homogeneous_bidegree(g).has_value());
    CHECK(*Q.homogeneous_bidegree(g) == Bidegree{delta, d});
    Poly local = dehomogenize(Q, g, {0, 0}).translated(*coords, 3);
    std::vector<felem> row(js.dim(), 0);
    for (auto& [mon, coef] : local.terms()) row[col.at(mon)] = coef;
    rows.push_back(row);
  }
  CHECK(rank_of(F, std::move(rows)) == js.dim());
}

TEST_CASE("surjectivity cases at their stated bounds") {
  const GF& F16 = GF::get(2, 4);
  const GF& F9 = GF::get(3, 2);
  SUBCASE("case 1 at the bound") {
    for (const GF* F : {&F16, &F9}) {
      auto rep = verify_surjrest_case(1, 1, 3, 0, 0, 2, 1, *F, 100, 424242);
      CHECK(rep.hypothesis_ok);
      CHECK(rep.all_surjective);
    }
  }
  SUBCASE("case 1 below the bound fails at the standard point") {
    auto rep = verify_surjrest_case(1, 1, 3, 0, 0, 1, 1, F16, 0, 1);
    CHECK(!rep.hypothesis_ok);
    REQUIRE(!rep.points.empty());
    CHECK(!rep.points[0].surjective);
  }
  SUBCASE("case 4 with the weight-1 z variable") {
    auto rep = verify_surjrest_case(4, 1, 3, 0, 1, 4, 1, F16, 50, 7);
    CHECK(rep.hypothesis_ok);
    CHECK(rep.all_surjective);
  }
  SUBCASE("case 3 on the middle stratum") {
    auto rep = verify_surjrest_case(3, 1, 4, 1, 2, 6, 1, F9, 50, 11);
    CHECK(rep.hypothesis_ok);
    CHECK(rep.all_surjective);
  }
  SUBCASE("case 2 at the bound") {
    auto rep = verify_surjrest_case(2, 2, 6, 1, 1, 3, 1, F16, 30, 13);
    CHECK(rep.hypothesis_ok);
    CHECK(rep.all_surjective);
  }
  SUBCASE("stratum off the weight-1 charts is refused") {
    CHECK_THROWS(verify_surjrest_case(4, 2, 6, 0, 0, 13, 1, F16, 5, 3));
  }
}
