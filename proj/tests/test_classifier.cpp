#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dpfib/classifier.hpp"

using namespace dpfib;

TEST_CASE("validity constraints, degree 1") {
  CHECK(!validate(FamilyParams::dp1(3, 0, 0)).empty());  // mu must be positive
  CHECK(validate(FamilyParams::dp1(3, 0, 1)).empty());
  CHECK(validate(FamilyParams::dp1(3, 6, 5)).empty());   // 6mu = 5lambda
  CHECK(!validate(FamilyParams::dp1(3, 5, 4)).empty());  // mu < lambda without the ratio
  CHECK(!validate(FamilyParams::dp1(3, -1, 1)).empty());
}

TEST_CASE("validity constraints, degree 2") {
  CHECK(validate(FamilyParams::dp2(3, 0, 0, 1)).empty());
  CHECK(!validate(FamilyParams::dp2(3, 0, 1, 1)).empty());  // nu = 1 forces lambda = mu = 0
  CHECK(!validate(FamilyParams::dp2(3, 0, 2, 2)).empty());  // 2nu < 3mu
  CHECK(!validate(FamilyParams::dp2(3, 2, 2, 3)).empty());  // 2nu < 4lambda
  CHECK(validate(FamilyParams::dp2(3, 3, 4, 6)).empty());   // 2nu = 3mu = 4lambda
  // strict middle range 3mu < 2nu < 4mu with 2nu != 3mu + lambda forces n = 3
  CHECK(validate(FamilyParams::dp2(3, 0, 3, 5)).empty());
  CHECK(!validate(FamilyParams::dp2(5, 0, 3, 5)).empty());
}

TEST_CASE("validity constraints, degree 3") {
  CHECK(!validate(FamilyParams::dp3(3, 5, 0, 2, 2)).empty());  // theta < 3mu
  CHECK(validate(FamilyParams::dp3(3, 3, 0, 0, 1)).empty());
  CHECK(validate(FamilyParams::dp3(3, 1, 0, 0, 0)).empty());
  CHECK(validate(FamilyParams::dp3(3, 2, 0, 0, 1)).empty());
  CHECK(!validate(FamilyParams::dp3(3, 2, 0, 1, 1)).empty());  // small theta list
  CHECK(!validate(FamilyParams::dp3(3, 1, 0, 0, 1)).empty());  // theta < 2nu
  // theta strictly inside (2nu, 2nu + lambda) is impossible
  CHECK(!validate(FamilyParams::dp3(3, 7, 2, 2, 3)).empty());
  CHECK(validate(FamilyParams::dp3(3, 6, 2, 2, 3)).empty());
  CHECK(validate(FamilyParams::dp3(3, 4, 1, 1, 2)).empty());
  // upper middle range forces n <= 4
  CHECK(validate(FamilyParams::dp3(4, 5, 0, 0, 2)).empty());
  CHECK(!validate(FamilyParams::dp3(5, 5, 0, 0, 2)).empty());
}

TEST_CASE("anticanonical classes") {
  // (n-1+lambda-mu) F + D for degree 1
  CHECK(anticanonical_class(FamilyParams::dp1(3, 0, 1)) == DivisorClass{1, 1});
  CHECK(anticanonical_class(FamilyParams::dp1(3, 1, 1)) == DivisorClass{2, 1});
  CHECK(anticanonical_class(FamilyParams::dp3(3, 3, 0, 0, 1)) == DivisorClass{0, 1});
  CHECK(anticanonical_class(FamilyParams::dp2(3, 0, 0, 1)) == DivisorClass{1, 1});
}

TEST_CASE("ample thresholds") {
  CHECK(ample_threshold(FamilyParams::dp3(3, 3, 0, 0, 1)) == Rational(1));
  // lambda <= mu: threshold mu; -K = F + D sits on the boundary
  FamilyParams p = FamilyParams::dp1(3, 0, 1);
  CHECK(ample_threshold(p) == Rational(1));
  CHECK(anticanonical_not_ample(p));
  // away from the boundary the anticanonical class is ample
  CHECK(!anticanonical_not_ample(FamilyParams::dp1(3, 1, 1)));
  // degree 2 with nu >= 2mu: threshold nu/2
  CHECK(ample_threshold(FamilyParams::dp2(3, 0, 0, 3)) == Rational(3, 2));
}

TEST_CASE("associated sheaf classes and the independent recomputation") {
  auto M1 = sheaf_M_bidegree(FamilyParams::dp1(3, 0, 1));
  CHECK(M1.cited == Bidegree{2, 2});
  CHECK(M1.characteristic == 2);
  auto M2 = sheaf_M_bidegree(FamilyParams::dp2(3, 0, 0, 1));
  CHECK(M2.cited == Bidegree{0, 1});
  auto M3 = sheaf_M_bidegree(FamilyParams::dp3(3, 3, 0, 0, 1));
  CHECK(M3.cited == Bidegree{1, 0});
  auto Mt = sheaf_M_bidegree(FamilyParams::dp2(3, 3, 4, 6));
  CHECK(Mt.route == SheafRoute::Dp2Triple);
  CHECK(Mt.characteristic == 3);
  CHECK(Mt.cited == Bidegree{6 - 3 - 2, 0});
  // the full grid agrees between the cited formula and the adjunction route
  for (int n : {3, 4, 5}) {
    for (long l = 0; l <= 4; ++l)
      for (long m = 0; m <= 4; ++m)
        if (validate(FamilyParams::dp1(n, l, m)).empty())
          CHECK_NOTHROW(sheaf_M_bidegree(FamilyParams::dp1(n, l, m)));
    for (long l = 0; l <= 4; ++l)
      for (long m = l; m <= 4; ++m)
        for (long v = 0; v <= 4; ++v)
          if (validate(FamilyParams::dp2(n, l, m, v)).empty())
            CHECK_NOTHROW(sheaf_M_bidegree(FamilyParams::dp2(n, l, m, v)));
    for (long th = 0; th <= 12; ++th)
      for (long l = 0; l <= 4; ++l)
        for (long m = l; m <= 4; ++m)
          for (long v = m; v <= 4; ++v)
            if (validate(FamilyParams::dp3(n, th, l, m, v)).empty())
              CHECK_NOTHROW(sheaf_M_bidegree(FamilyParams::dp3(n, th, l, m, v)));
  }
}

TEST_CASE("section existence for the associated sheaf") {
  BundleSpec P1 = ambient_bundle(FamilyParams::dp1(3, 0, 1));
  CHECK(h0_positive(P1, {2, 2}));
  CHECK(!h0_positive(P1, {-1, 2}));
  CHECK(h0_positive(P1, {0, 0}));
}

TEST_CASE("classification verdicts") {
  CHECK(classify(FamilyParams::dp3(3, 1, 0, 0, 0)).tag == VerdictTag::ExceptionalRational);
  CHECK(classify(FamilyParams::dp3(3, 3, 1, 1, 1)).tag == VerdictTag::ExceptionalCubicBlowup);
  CHECK(classify(FamilyParams::dp2(3, 0, 0, 1)).tag == VerdictTag::NotStablyRationalVG);
  CHECK(classify(FamilyParams::dp1(3, 0, 1)).tag == VerdictTag::NotStablyRationalVG);
  CHECK(classify(FamilyParams::dp1(3, 0, 0)).tag == VerdictTag::Invalid);
  // inequality failing for a valid family away from the corollary ranges
  // DP1(7, 0, 1): 4 - 0 - 6 < 0, n = 7, -K = 6F + D ample (threshold 1)
  Verdict v = classify(FamilyParams::dp1(7, 0, 1));
  CHECK(v.tag == VerdictTag::Inconclusive);
}

TEST_CASE("classification is invariant under the normalization swap") {
  CHECK(classify(FamilyParams::dp2(3, 2, 1, 3)).tag == classify(FamilyParams::dp2(3, 1, 2, 3)).tag);
  CHECK(classify(FamilyParams::dp3(4, 6, 2, 0, 1)).tag ==
        classify(FamilyParams::dp3(4, 6, 0, 1, 2)).tag);
}

TEST_CASE("theta-monotonicity of the degree-3 verdict") {
  for (long th = 0; th <= 9; ++th)
    for (long l = 0; l <= 3; ++l)
      for (long m = l; m <= 3; ++m)
        for (long v = m; v <= 3; ++v) {
          FamilyParams p = FamilyParams::dp3(3, th, l, m, v);
          FamilyParams q = FamilyParams::dp3(3, th + 1, l, m, v);
          if (!validate(p).empty() || !validate(q).empty()) continue;
          if (classify(p).tag == VerdictTag::NotStablyRationalVG &&
              classify(q).tag != VerdictTag::NotStablyRationalVG)
            CHECK(classify(q).tag == VerdictTag::ExceptionalCubicBlowup);
        }
}

TEST_CASE("ample-threshold consistency across the enumeration grid") {
  for (int degree : {1, 2, 3})
    for (int n : {3, 4, 5, 6}) {
      auto all = enumerate_families(degree, n, 4, 12);
      for (auto& [p, v] : all) {
        if (v.tag == VerdictTag::ExceptionalRational || v.tag == VerdictTag::ExceptionalCubicBlowup)
          continue;
        if (anticanonical_not_ample(p)) CHECK(v.tag == VerdictTag::NotStablyRationalVG);
      }
    }
}

TEST_CASE("degree-3 exceptional families under enumeration") {
  auto all = enumerate_families(3, 3, 3, 6);
  int exceptional = 0;
  for (auto& [p, v] : all) {
    if (v.tag == VerdictTag::ExceptionalRational) {
      ++exceptional;
      CHECK(p == FamilyParams::dp3(3, 1, 0, 0, 0));
    } else if (v.tag == VerdictTag::ExceptionalCubicBlowup) {
      ++exceptional;
      CHECK(p == FamilyParams::dp3(3, 3, 1, 1, 1));
    } else {
      CHECK(v.tag == VerdictTag::NotStablyRationalVG);
    }
  }
  CHECK(exceptional == 2);
}

TEST_CASE("low-degree enumerations are fully obstructed at n = 3") {
  for (auto& [p, v] : enumerate_families(1, 3, 2, 0))
    CHECK(v.tag == VerdictTag::NotStablyRationalVG);
  for (auto& [p, v] : enumerate_families(2, 3, 3, 0))
    CHECK(v.tag == VerdictTag::NotStablyRationalVG);
}

TEST_CASE("headline covering families") {
  auto h1 = mainthm3_params(1, 3, 1);
  CHECK(h1.params == FamilyParams::dp2(3, 0, 0, 1));
  CHECK(!h1.warning);
  CHECK(classify(h1.params).tag == VerdictTag::NotStablyRationalVG);

  auto h3 = mainthm3_params(3, 3, 2);
  CHECK(h3.params == FamilyParams::dp3(3, 2, 0, 0, 0));
  CHECK(classify(h3.params).tag == VerdictTag::NotStablyRationalVG);

  auto hexc = mainthm3_params(3, 3, 1);
  CHECK(classify(hexc.params).tag == VerdictTag::ExceptionalRational);

  auto hwarn = mainthm3_params(3, 6, 2);  // d = 2 < n - 1 = 5
  CHECK(hwarn.warning.has_value());
}

TEST_CASE("verdict JSON has deterministic shape") {
  FamilyParams p = FamilyParams::dp3(3, 3, 0, 0, 1);
  Verdict v = classify(p);
  std::string a = v.to_json(p);
  std::string b = classify(p).to_json(p);
  CHECK(a == b);
  CHECK(a.find("NotStablyRationalVG") != std::string::npos);
}
