#pragma once

#include <string>
#include <vector>

#include "dpfib/bundle.hpp"
#include "dpfib/gf.hpp"
#include "dpfib/poly.hpp"

namespace dpfib {

// Jets at a nonsingular point: chart coordinates translated so the
// point is the origin, truncated below the given order.
struct JetSpace {
  Chart chart;
  int order = 1;
  std::vector<Monomial> basis;  // chart monomials of degree < order, lex
  int dim() const { return static_cast<int>(basis.size()); }
};

JetSpace jet_space(const BundleSpec& spec, const Chart& chart, int order);

// Matrix of the k-th restriction map of O(bd) at the point: one row per
// graded-piece basis monomial, one column per jet monomial.  The point
// must lie on a chart with a weight-1 pivot (else it sits in the
// singular locus and the map is undefined here).
struct RestrictionMatrix {
  Chart chart;
  int order = 1;
  int jet_dim = 0;
  std::vector<std::vector<felem>> rows;
  int rank(const GF& F) const;
  bool surjective(const GF& F) const { return rank(F) == jet_dim; }
};

RestrictionMatrix restriction_matrix(const BundleSpec& spec, const GF& F, Bidegree bd,
                                     const Point& point, int k);

// The graded bundle the surjectivity cases live on: fiber variables
// x, y, z with twists (0, lambda, mu) and weights (1, 1, m).
BundleSpec surjectivity_bundle(int base_dim, int m, long lambda, long mu);

enum class Stratum { UX, PiY, GammaZ };

struct SurjPointResult {
  Point point;
  int rank = 0;
  int jet_dim = 0;
  bool surjective = false;
};

struct SurjReport {
  int case_id = 0;
  int order = 0;  // jet order k of the case
  Stratum stratum = Stratum::UX;
  bool hypothesis_ok = false;
  std::string hypothesis_note;
  std::vector<SurjPointResult> points;  // standard point first, then samples
  bool all_surjective = false;
  std::string to_json() const;
};

// Cases:
//  1: order 3 on U_x,      needs d >= 3m and delta >= max(2, 2l, 2mu)
//  2: order 4 on U_x,      needs d >= 3m and delta >= max(3, 3l, 3mu)
//  3: order 2 on Pi_y,     needs mu >= m*lambda and
//                          delta >= max(d*lambda+1, (d-m)*lambda+mu)
//  4: order 2 on Gamma_z,  needs m = 1, lambda <= mu, delta >= d*mu+1
// Runs regardless of the hypothesis (useful for sharpness probing); the
// report says whether the hypothesis held.
SurjReport verify_surjrest_case(int case_id, int m, int d, long lambda, long mu, long delta,
                                int base_dim, const GF& F, int sample_size, std::uint64_t seed);

}  // namespace dpfib
