#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "dpfib/gf.hpp"

using namespace dpfib;

TEST_CASE("field axioms on random triples for every supported field") {
  for (int p : {2, 3}) {
    int kmax = p == 2 ? 10 : 6;
    for (int k = 1; k <= kmax; ++k) {
      const GF& F = GF::get(p, k);
      Rng rng(17 * p + k);
      for (int trial = 0; trial < 50; ++trial) {
        felem a = rng.uniform(F), b = rng.uniform(F), c = rng.uniform(F);
        CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
        CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
        CHECK(F.add(a, b) == F.add(b, a));
        CHECK(F.mul(a, b) == F.mul(b, a));
        CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
        CHECK(F.add(a, F.neg(a)) == F.zero());
        if (a != 0) CHECK(F.mul(a, F.inv(a)) == F.one());
      }
    }
  }
}

TEST_CASE("Frobenius is an additive (hence field) automorphism") {
  for (int p : {2, 3}) {
    const GF& F = GF::get(p, p == 2 ? 5 : 3);
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
      felem a = rng.uniform(F), b = rng.uniform(F);
      CHECK(F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b)));
      CHECK(F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b)));
      CHECK(F.frobenius(F.pth_root(a)) == a);
    }
  }
}

TEST_CASE("generator has full multiplicative order") {
  for (int p : {2, 3})
    for (int k = 1; k <= 4; ++k) {
      const GF& F = GF::get(p, k);
      std::set<felem> seen;
      felem cur = F.one();
      for (int i = 0; i < F.size() - 1; ++i) {
        seen.insert(cur);
        cur = F.mul(cur, F.generator());
      }
      CHECK(static_cast<int>(seen.size()) == F.size() - 1);
      CHECK(cur == F.one());
    }
}

TEST_CASE("point enumeration: counts, no duplicates, lexicographic") {
  const GF& F2 = GF::get(2, 1);
  int count = 0;
  enumerate_points(F2, 2, kDefaultScanBudget, [&](std::span<const felem>) { ++count; });
  CHECK(count == 4);

  const GF& F9 = GF::get(3, 2);
  std::set<std::vector<felem>> pts;
  std::vector<felem> prev;
  enumerate_points(F9, 3, kDefaultScanBudget, [&](std::span<const felem> pt) {
    std::vector<felem> v(pt.begin(), pt.end());
    if (!prev.empty()) CHECK(prev < v);
    prev = v;
    pts.insert(v);
  });
  CHECK(pts.size() == 729);
}

TEST_CASE("character-sum oracle: any GF(2)-linear functional sums to zero over GF(8)^4") {
  const GF& F8 = GF::get(2, 3);
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<felem> coeffs(4);
    for (auto& c : coeffs) c = rng.uniform(F8);
    // trace-of-linear-form functional into GF(2)
    int sum = 0;
    enumerate_points(F8, 4, kDefaultScanBudget, [&](std::span<const felem> pt) {
      felem v = 0;
      for (int i = 0; i < 4; ++i) v = F8.add(v, F8.mul(coeffs[i], pt[i]));
      felem tr = F8.add(F8.add(v, F8.frobenius(v)), F8.frobenius(F8.frobenius(v)));
      CHECK((tr == 0 || tr == 1));
      sum ^= tr;
    });
    CHECK(sum == 0);
  }
}

TEST_CASE("budget refusal reports the required size") {
  const GF& F = GF::get(2, 10);
  CHECK_THROWS_AS(point_count(F, 4, 1000), budget_exceeded);
  try {
    point_count(F, 4, 1000);
  } catch (const budget_exceeded& e) {
    CHECK(e.required == 1LL << 40);
  }
}

TEST_CASE("field spec strings and element literals") {
  CHECK(GF::parse("GF(2^3)").size() == 8);
  CHECK(GF::parse("GF(3^2)").size() == 9);
  CHECK(GF::parse("GF(2)").size() == 2);
  CHECK(GF::get(3, 2).name() == "GF(3^2)");

  const GF& F = GF::get(2, 3);
  CHECK(F.parse_elem("0") == 0);
  CHECK(F.parse_elem("1") == 1);
  CHECK(F.parse_elem("g") == F.generator());
  CHECK(F.parse_elem("g^3") == F.pow(F.generator(), 3));
  for (felem a = 0; a < F.size(); ++a) CHECK(F.parse_elem(F.format(a)) == a);

  // power-basis coordinates round-trip
  for (felem a = 0; a < F.size(); ++a) {
    auto c = F.coords(a);
    CHECK(F.from_coords(c) == a);
  }
}

TEST_CASE("integers reduce into the field") {
  const GF& F = GF::get(3, 1);
  CHECK(F.from_int(-1) == F.from_int(2));
  CHECK(F.from_int(7) == F.from_int(1));
}

TEST_CASE("subfield embeddings preserve arithmetic") {
  const GF& small = GF::get(2, 3);
  const GF& big = GF::get(2, 6);
  const auto& emb = small.embedding_into(big);
  CHECK(emb[small.zero()] == big.zero());
  CHECK(emb[small.one()] == big.one());
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    felem a = rng.uniform(small), b = rng.uniform(small);
    CHECK(emb[small.add(a, b)] == big.add(emb[a], emb[b]));
    CHECK(emb[small.mul(a, b)] == big.mul(emb[a], emb[b]));
  }
}

TEST_CASE("deterministic rng streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("rationals normalize") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-3, -6) == Rational(1, 2));
  CHECK(Rational(3, -6).str() == "-1/2");
  CHECK(Rational(1, 2) < Rational(2, 3));
  CHECK(Rational(4).str() == "4");
}
