#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpfib/bundle.hpp"
#include "dpfib/gf.hpp"
#include "dpfib/poly.hpp"

namespace dpfib {

enum class CritClass { NotCritical, Nondegenerate, AlmostNondegenerate, Degenerate };

std::string to_string(CritClass c);

struct CritRecord {
  std::vector<felem> point;  // chart coordinates
  CritClass cls = CritClass::NotCritical;
  int hessian_rank = 0;
  std::optional<int> local_length;  // set when the classifier computed it
  Chart chart{-1, -1};              // (-1,-1) outside bundle context
  bool on_documented_locus = false;

  friend bool operator==(const CritRecord& a, const CritRecord& b) {
    return a.point == b.point && a.cls == b.cls && a.hessian_rank == b.hessian_rank;
  }
};

// Hessian of f at a point.  In characteristic 2 the diagonal vanishes
// identically, so the matrix is alternating and its rank is even.
struct HessianMatrix {
  int n = 0;
  std::vector<felem> entries;  // row-major
  felem at(int i, int j) const { return entries[i * n + j]; }
  int rank(const GF& F) const;
};

HessianMatrix hessian_at(const Poly& f, std::span<const felem> point);

inline constexpr int kDefaultLengthCap = 8;

// Dimension over the field of the local quotient at the point by the
// ideal the generators span, truncated at the given jet order.  Returns
// nullopt when the dimension has not stabilized between cap-1 and cap
// (reported as infinite by callers); this is conservative, stabilized
// values are exact.
std::optional<int> local_length_truncated(const std::vector<Poly>& generators,
                                          std::span<const felem> point, int cap);

CritRecord classify_critical_point(const Poly& f, std::span<const felem> point,
                                   int length_cap = kDefaultLengthCap);

// Every field-rational point of the affine chart where all first
// partials vanish, classified.  Exhaustive within the budget; records
// sorted by coordinates.
std::vector<CritRecord> critical_points_census(const Poly& f,
                                               long long budget = kDefaultScanBudget,
                                               int length_cap = kDefaultLengthCap);

// Remark-style check that multiplying by the p-th power of a unit at
// the point does not change the classification.
bool unit_multiple_invariance_check(const Poly& f, const Poly& a, std::span<const felem> point);

// Structural conditions certifying that a positive-dimensional critical
// locus has the resolvable transverse shape.
//   TransverseCusp:   f ~ a x + b x^2 + c x y + y^3 + g   (char 2)
//                     f ~ a x + b x^2 + c x y + y^2 + g   (char 3)
//     with a,b,c in the u-variables, deg a > 0, (a = 0) nonsingular,
//     g in (x,y)^3 (char 2: y^3-divisible monomials of g divisible by
//     y^3 x or y^4), critical set near Xi = (x = y = a = 0) equal to Xi.
//   TransverseLinear: f ~ a x + b y + g with deg a, deg b > 0,
//     (a = b = 0) a nonsingular complete intersection, g in (x,y)^2,
//     critical set near Xi = (x = y = a = b = 0) equal to Xi.
enum class ConditionKind { TransverseCusp, TransverseLinear };

struct ConditionCheck {
  std::string name;
  bool pass = false;
  bool partial = false;  // rational-point evidence only
  bool genericity_sensitive = false;
  std::string evidence;
};

struct ConditionReport {
  ConditionKind kind = ConditionKind::TransverseCusp;
  bool pass = false;
  std::vector<ConditionCheck> checks;
  std::map<std::string, std::string> witnesses;
  std::string to_json() const;
};

// f lives on an affine ring whose variables are u's plus the two named
// below; x_var/y_var are ring indices.  Scans run over the coefficient
// field and one extension (degree 2), flagged partial.
ConditionReport check_condition_cusp(const Poly& f, int x_var, int y_var,
                                     long long budget = kDefaultScanBudget);
ConditionReport check_condition_linear(const Poly& f, int x_var, int y_var,
                                       long long budget = kDefaultScanBudget);

}  // namespace dpfib
