#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpfib/bundle.hpp"
#include "dpfib/gf.hpp"

namespace dpfib {

// Numerical data of a fibration family.  Degree-2/3 twists are stored
// in the canonical order lambda <= mu (<= nu); the factories sort.
struct FamilyParams {
  int degree = 1;  // del Pezzo degree: 1, 2 or 3
  int n = 3;       // total dimension; base is P^{n-2}
  long theta = 0;  // degree 3 only
  long lambda = 0;
  long mu = 0;
  long nu = 0;  // unused for degree 1

  static FamilyParams dp1(int n, long lambda, long mu);
  static FamilyParams dp2(int n, long lambda, long mu, long nu);
  static FamilyParams dp3(int n, long theta, long lambda, long mu, long nu);

  std::string str() const;
  friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

enum class VerdictTag {
  NotStablyRationalVG,  // very general member not stably rational
  ExceptionalRational,
  ExceptionalCubicBlowup,
  Inconclusive,
  Invalid,
};

std::string to_string(VerdictTag t);

struct Verdict {
  VerdictTag tag = VerdictTag::Invalid;
  std::vector<std::string> reasons;
  std::optional<Bidegree> sheaf_M;
  DivisorClass anticanonical{};
  std::string to_json(const FamilyParams& params) const;
};

// Violated validity rules; empty means the family passes every
// numerical constraint.
std::vector<std::string> validate(const FamilyParams& p);

// The ambient bundle P containing the family member and the member's
// class in it.
BundleSpec ambient_bundle(const FamilyParams& p);
Bidegree member_bidegree(const FamilyParams& p);

DivisorClass anticanonical_class(const FamilyParams& p);

// alpha F + D is ample exactly when alpha exceeds this threshold.
Rational ample_threshold(const FamilyParams& p);
inline bool anticanonical_not_ample(const FamilyParams& p) {
  return Rational(anticanonical_class(p).coeff_F) <= ample_threshold(p);
}

enum class SheafRoute { Dp1, Dp2Main, Dp2Triple, Dp3Scaled, Dp3Plain, Dp3Double };
std::string to_string(SheafRoute r);

struct SheafM {
  Bidegree cited;       // closed-form class of the associated sheaf
  Bidegree recomputed;  // independent canonical/adjunction route
  SheafRoute route = SheafRoute::Dp1;
  int characteristic = 2;
};

// Throws on invalid params and on disagreement of the two routes.
SheafM sheaf_M_bidegree(const FamilyParams& p);

bool h0_positive(const BundleSpec& spec, Bidegree bd);

Verdict classify(const FamilyParams& p);

// All valid canonical-form families within the bounds, with verdicts,
// in lexicographic parameter order.
std::vector<std::pair<FamilyParams, Verdict>> enumerate_families(int degree, int n,
                                                                 long max_twist, long max_theta);

// The covering-family constructions behind the headline statement:
//  1: double cover of P^{n-2} x P^2 branched in bidegree (2m,4)
//  2: triple cover of P^{n-2} x P^2 branched in bidegree (3m,3)
//  3: hypersurface of bidegree (d,3) in P^{n-2} x P^3
struct HeadlineFamily {
  FamilyParams params;
  std::optional<std::string> warning;  // set when below the case's bound
};
HeadlineFamily mainthm3_params(int case_id, int n, long m_or_d);

}  // namespace dpfib
