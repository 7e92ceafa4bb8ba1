#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpfib/gf.hpp"
#include "dpfib/poly.hpp"

namespace dpfib {

// Z^2-degree (alpha, beta): base degree and weighted fiber degree.
struct Bidegree {
  long alpha = 0;
  long beta = 0;
  Bidegree operator+(const Bidegree& o) const { return {alpha + o.alpha, beta + o.beta}; }
  Bidegree operator-(const Bidegree& o) const { return {alpha - o.alpha, beta - o.beta}; }
  Bidegree operator*(long s) const { return {alpha * s, beta * s}; }
  friend bool operator==(const Bidegree&, const Bidegree&) = default;
  std::string str() const { return "(" + std::to_string(alpha) + "," + std::to_string(beta) + ")"; }
};

// Divisor class c_F * F + c_D * D in the rank-2 class group.
struct DivisorClass {
  long coeff_F = 0;
  long coeff_D = 0;
  friend bool operator==(const DivisorClass&, const DivisorClass&) = default;
  std::string str() const {
    return std::to_string(coeff_F) + "F + " + std::to_string(coeff_D) + "D";
  }
};

// Affine chart U_{i,j} = (u_i != 0) & (x_j != 0); x_j must have weight 1.
struct Chart {
  int i = 0;
  int j = 0;
  friend bool operator==(const Chart&, const Chart&) = default;
};

// A weighted-projective-space bundle over P^base_dim, presented by the
// two-row grading: columns (1,0) for each of u_0..u_{base_dim} followed
// by (twist_j, weight_j) for each fiber variable.
class BundleSpec {
public:
  BundleSpec(int base_dim, std::vector<long> twists, std::vector<long> weights);
  // The bundles over P^{n-2} used by the fibration families.
  static BundleSpec over_base_of(int n, std::vector<long> twists, std::vector<long> weights) {
    return BundleSpec(n - 2, std::move(twists), std::move(weights));
  }

  int base_dim() const { return base_dim_; }
  int fiber_count() const { return static_cast<int>(weights_.size()); }  // m + 1
  long twist(int j) const { return twists_[j]; }
  long weight(int j) const { return weights_[j]; }
  const std::vector<long>& twists() const { return twists_; }
  const std::vector<long>& weights() const { return weights_; }

  int nvars() const { return base_dim_ + 1 + fiber_count(); }
  int u_var(int i) const { return i; }
  int x_var(int j) const { return base_dim_ + 1 + j; }
  bool is_fiber_var(int v) const { return v > base_dim_; }
  const RingPtr& cox_ring() const { return cox_ring_; }
  int dimension() const { return base_dim_ + fiber_count() - 1; }

  Bidegree bidegree_of(const Monomial& m) const;
  // Checks all terms share one bidegree; returns it (zero poly: nullopt).
  std::optional<Bidegree> homogeneous_bidegree(const Poly& f) const;

  void require_valid_chart(const Chart& c) const;
  RingPtr chart_ring(const Chart& c) const;

  std::string to_json() const;
  static BundleSpec from_json(const std::string& text);
  friend bool operator==(const BundleSpec& a, const BundleSpec& b) {
    return a.base_dim_ == b.base_dim_ && a.twists_ == b.twists_ && a.weights_ == b.weights_;
  }

private:
  int base_dim_;
  std::vector<long> twists_;
  std::vector<long> weights_;
  RingPtr cox_ring_;
};

// All monomials of exact bidegree bd, ascending lexicographic on the
// concatenated exponent vector.  Empty when the graded piece is zero.
std::vector<Monomial> monomial_basis(const BundleSpec& spec, Bidegree bd);

// Whether the graded piece is nonzero, without enumerating all of it;
// returns the lexicographically smallest monomial as witness.
std::optional<Monomial> h0_witness(const BundleSpec& spec, Bidegree bd);

Poly random_poly(const BundleSpec& spec, const GF& F, Bidegree bd, Rng& rng);

// Substitutes u_i = x_j = 1 and expresses the result in the chart ring.
Poly dehomogenize(const BundleSpec& spec, const Poly& f, const Chart& c);

// Points are coordinate lifts (u..., x...).
using Point = std::vector<felem>;

bool is_valid_point(const BundleSpec& spec, const Point& p);
// Scales by the two-torus action so the first nonzero u-coordinate and
// then the first nonzero weight-1 fiber coordinate become 1.  Fails
// (nullopt) off the weight-1 charts.
std::optional<Point> canonical_lift(const BundleSpec& spec, const GF& F, const Point& p);
// Chart membership test + the chart coordinates of the point.
std::optional<std::vector<felem>> chart_coords(const BundleSpec& spec, const GF& F,
                                               const Point& p, const Chart& c);
Point lift_from_chart(const BundleSpec& spec, const Chart& c, std::span<const felem> coords);

// Coordinate automorphism clearing fiber coordinates of a point with
// u_0 != 0 and x_j != 0 (weight of x_j must be 1):
//   x_l -> A_l x_l - beta_l u_0^{e_l} x_j^{a_l}   for twist(l)/a_l >= twist(j),
// with A_l = alpha_0^{e_l} beta_j^{a_l}, e_l = twist(l) - a_l twist(j).
// Bidegrees of homogeneous polynomials are preserved.
struct CoordChange {
  struct Op {
    int l;          // fiber index being cleared
    felem scale;    // A_l
    felem beta_l;   // subtracted coordinate value
    long u0_exp;    // e_l
    int j;          // pivot fiber index
    long xj_exp;    // a_l
  };
  const BundleSpec* spec = nullptr;
  const GF* F = nullptr;
  std::vector<Op> ops;

  Poly apply(const Poly& f) const;
  Point apply(const Point& p) const;
};

CoordChange move_point_to_standard(const BundleSpec& spec, const GF& F, const Point& p,
                                   int j = -1);

// Canonical class of the toric ambient:
// (-(base_dim+1) - sum of twists, -sum of weights).
Bidegree canonical_bidegree(const BundleSpec& spec);
// Canonical class of a hypersurface of class hyp in the ambient.
Bidegree adjunction_bidegree(const BundleSpec& ambient, Bidegree hyp);
// Generators of the nef cone: F and twist(l) F + weight(l) D where l
// maximizes twist/weight (among ties: smallest weight, then index).
std::pair<DivisorClass, DivisorClass> nef_generators(const BundleSpec& spec);

}  // namespace dpfib
