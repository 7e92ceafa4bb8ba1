#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpfib/bundle.hpp"
#include "dpfib/classifier.hpp"
#include "dpfib/critical.hpp"
#include "dpfib/gf.hpp"

namespace dpfib {

// Which positive-characteristic degeneration a family uses.
enum class MemberRoute {
  Dp1DoubleCover,        // w^2 + f,               char 2
  Dp2DoubleCover,        // w^2 + f,               char 2
  Dp2TripleCover,        // z^3 x + f,             char 3 (2nu = 3mu = 4lambda)
  Dp3TripleCoverScaled,  // a w^3 + f,             char 3 (theta > 3nu)
  Dp3TripleCover,        // w^3 + f,               char 3 (theta = 3nu)
  Dp3DoubleCover,        // w^2 (a x + b y + c z) + f, char 2 (theta < 3nu)
};

std::string to_string(MemberRoute r);
MemberRoute route_for(const FamilyParams& p);
int route_characteristic(MemberRoute r);

// A positive-dimensional critical locus the analysis expects, together
// with the structural condition that certifies its resolvability.
struct LocusDescriptor {
  std::string name;
  std::vector<int> zero_fibers;   // fiber indices vanishing on the locus
  std::vector<Poly> u_equations;  // u-only equations on the census base
  ConditionKind condition = ConditionKind::TransverseCusp;
  int chart_fiber = 0;    // the locus is covered by charts U_{i, chart_fiber}
  int role_x_fiber = 0;   // fiber playing "x" in the condition
  int role_y_fiber = 0;   // fiber playing "y"
};

struct SpecialMember {
  FamilyParams params;
  MemberRoute route = MemberRoute::Dp1DoubleCover;
  const GF* field = nullptr;
  std::uint64_t seed = 0;

  BundleSpec ambient;   // P, where X = (defining = 0) lives
  Poly defining;        // F
  Bidegree member_bd;

  Bidegree sheaf_L;     // class of the cover sheaf on the cover base
  int cover_degree = 2;

  // Branch-section census data: scan the charts of census_base for
  // critical points of census_section, skipping the (census_unit = 0)
  // part when a unit is present (it is handled structurally).
  BundleSpec census_base;
  Poly census_section;
  std::optional<Poly> census_unit;
  std::vector<Chart> census_charts;
  std::vector<LocusDescriptor> loci;

  std::map<std::string, Poly> named;  // route building blocks (branch f, a, b, c, ...)
  std::vector<std::string> build_log;

  SpecialMember() : ambient(1, {0}, {1}), census_base(1, {0}, {1}) {}
};

struct genericity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One random draw per attempt; genericity rejections are retried up to
// max_retries, then reported with the advice to enlarge the field.
SpecialMember build_special_member(const FamilyParams& p, const GF& F, std::uint64_t seed,
                                   int max_retries = 50);

struct CheckOutcome {
  std::string name;
  bool pass = false;
  bool genericity_sensitive = false;  // a fresh random member may fix it
  bool partial = false;               // rational-point evidence only
  std::string detail;
};

struct ChartCensusSummary {
  Chart chart;
  std::string field;
  int nondegenerate = 0;
  int almost = 0;
  int degenerate_routed = 0;  // on documented loci
  int degenerate_bad = 0;
  std::string to_json() const;
};

enum class Overall { ObstructionWitnessed, PartialEvidence, Failed };
std::string to_string(Overall o);

struct PipelineReport {
  FamilyParams params;
  MemberRoute route = MemberRoute::Dp1DoubleCover;
  std::string field;
  std::uint64_t seed = 0;
  int attempts = 1;

  std::vector<CheckOutcome> checks;
  std::vector<ChartCensusSummary> census;
  std::vector<CritRecord> census_records;  // deduplicated across charts
  std::vector<ConditionReport> conditions;

  Bidegree sheaf_M{};
  Bidegree sheaf_M_recomputed{};
  bool h0_nonzero = false;
  std::string h0_witness_monomial;

  bool partial_evidence = true;  // rational scans only, by design
  Overall overall = Overall::Failed;
  std::vector<std::string> failures;
  std::vector<std::string> build_log;

  bool checks_pass() const;
  bool failures_only_genericity() const;
  std::string to_json() const;
};

// The verification battery on a fixed member; no retries.
PipelineReport run_battery(const SpecialMember& m, long long budget = kDefaultScanBudget);

// Build + battery with the genericity retry loop; refuses families the
// classifier marks Invalid or Exceptional (use the classifier instead).
struct pipeline_not_applicable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
PipelineReport run_pipeline(const FamilyParams& p, const GF& F, std::uint64_t seed,
                            long long budget = kDefaultScanBudget, int max_retries = 50);

// Deliberately broken members for the negative-control suite.
enum class Sabotage {
  KillCuspCoefficient,  // zero the z^3 coefficient of the degree-1 branch
  KillLocusEquation,    // zero a_mu in the degree-1 lambda = mu member
  SharedRootLinears,    // common root of a, b, c in the degree-3 double cover
};
SpecialMember build_sabotaged_member(Sabotage kind, const GF& F, std::uint64_t seed);

}  // namespace dpfib
