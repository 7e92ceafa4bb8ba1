#include "dpfib/classifier.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace dpfib {

FamilyParams FamilyParams::dp1(int n, long lambda, long mu) {
  FamilyParams p;
  p.degree = 1;
  p.n = n;
  p.lambda = lambda;
  p.mu = mu;
  return p;
}

FamilyParams FamilyParams::dp2(int n, long lambda, long mu, long nu) {
  FamilyParams p;
  p.degree = 2;
  p.n = n;
  p.lambda = std::min(lambda, mu);
  p.mu = std::max(lambda, mu);
  p.nu = nu;
  return p;
}

FamilyParams FamilyParams::dp3(int n, long theta, long lambda, long mu, long nu) {
  FamilyParams p;
  p.degree = 3;
  p.n = n;
  p.theta = theta;
  long t[3] = {lambda, mu, nu};
  std::sort(t, t + 3);
  p.lambda = t[0];
  p.mu = t[1];
  p.nu = t[2];
  return p;
}

std::string FamilyParams::str() const {
  switch (degree) {
    case 1:
      return "DP1(n=" + std::to_string(n) + "," + std::to_string(lambda) + "," +
             std::to_string(mu) + ")";
    case 2:
      return "DP2(n=" + std::to_string(n) + "," + std::to_string(lambda) + "," +
             std::to_string(mu) + "," + std::to_string(nu) + ")";
    default:
      return "DP3(n=" + std::to_string(n) + "," + std::to_string(theta) + "," +
             std::to_string(lambda) + "," + std::to_string(mu) + "," + std::to_string(nu) + ")";
  }
}

std::string to_string(VerdictTag t) {
  switch (t) {
    case VerdictTag::NotStablyRationalVG: return "NotStablyRationalVG";
    case VerdictTag::ExceptionalRational: return "ExceptionalRational";
    case VerdictTag::ExceptionalCubicBlowup: return "ExceptionalCubicBlowup";
    case VerdictTag::Inconclusive: return "Inconclusive";
    case VerdictTag::Invalid: return "Invalid";
  }
  return "?";
}

std::string to_string(SheafRoute r) {
  switch (r) {
    case SheafRoute::Dp1: return "sextic-double-cover";
    case SheafRoute::Dp2Main: return "quartic-double-cover";
    case SheafRoute::Dp2Triple: return "quartic-triple-cover";
    case SheafRoute::Dp3Scaled: return "cubic-triple-cover-scaled";
    case SheafRoute::Dp3Plain: return "cubic-triple-cover";
    case SheafRoute::Dp3Double: return "cubic-double-cover";
  }
  return "?";
}

std::vector<std::string> validate(const FamilyParams& p) {
  std::vector<std::string> bad;
  if (p.n < 3) bad.push_back("base-dimension: n >= 3 required");
  switch (p.degree) {
    case 1:
      if (p.lambda < 0) bad.push_back("dp1-normalization: lambda >= 0 required");
      if (p.mu <= 0) bad.push_back("dp1-mu-positive: mu > 0 required");
      if (p.mu < p.lambda && 6 * p.mu != 5 * p.lambda)
        bad.push_back("dp1-ratio: mu < lambda forces 6mu = 5lambda");
      break;
    case 2:
      if (p.lambda < 0 || p.lambda > p.mu)
        bad.push_back("dp2-normalization: 0 <= lambda <= mu required");
      if (!(p.nu >= 1) || (p.nu == 1 && !(p.lambda == 0 && p.mu == 0)))
        bad.push_back("dp2-nu-floor: nu >= 1, and nu = 1 forces lambda = mu = 0");
      if (2 * p.nu < 3 * p.mu) bad.push_back("dp2-nu-mu: 2nu >= 3mu required");
      if (2 * p.nu < 4 * p.lambda) bad.push_back("dp2-nu-lambda: 2nu >= 4lambda required");
      if (3 * p.mu < 2 * p.nu && 2 * p.nu < 4 * p.mu && 2 * p.nu != 3 * p.mu + p.lambda &&
          p.n != 3)
        bad.push_back("dp2-dimension: middle range of 2nu forces n = 3");
      if (2 * p.nu < 3 * p.mu + p.lambda && 2 * p.nu != 3 * p.mu)
        bad.push_back("dp2-low-range: 2nu < 3mu + lambda forces 2nu = 3mu");
      break;
    case 3:
      if (p.lambda < 0 || p.lambda > p.mu || p.mu > p.nu)
        bad.push_back("dp3-normalization: 0 <= lambda <= mu <= nu required");
      if (p.theta < 2 * p.nu) bad.push_back("dp3-theta-nu: theta >= 2nu required");
      if (p.theta < 3 * p.mu) bad.push_back("dp3-theta-mu: theta >= 3mu required");
      if (2 * p.nu + p.mu < p.theta && p.theta < 3 * p.nu && p.n > 4)
        bad.push_back("dp3-dimension-4: upper middle range of theta forces n <= 4");
      if (2 * p.nu + p.lambda < p.theta && p.theta < 2 * p.nu + p.mu && p.n != 3)
        bad.push_back("dp3-dimension-3: lower middle range of theta forces n = 3");
      if (p.theta < 2 * p.nu + p.lambda && p.theta != 2 * p.nu)
        bad.push_back("dp3-low-range: theta < 2nu + lambda forces theta = 2nu");
      if (p.theta <= 2) {
        bool listed = (p.theta == 1 && p.lambda == 0 && p.mu == 0 && p.nu == 0) ||
                      (p.theta == 2 && p.lambda == 0 && p.mu == 0 && (p.nu == 0 || p.nu == 1));
        if (!listed) bad.push_back("dp3-small-theta: theta <= 2 allows only (2,0,0,0), (2,0,0,1), (1,0,0,0)");
      }
      break;
    default:
      bad.push_back("degree must be 1, 2 or 3");
  }
  return bad;
}

BundleSpec ambient_bundle(const FamilyParams& p) {
  switch (p.degree) {
    case 1:
      return BundleSpec::over_base_of(p.n, {0, p.lambda, 2 * p.mu, 3 * p.mu}, {1, 1, 2, 3});
    case 2:
      return BundleSpec::over_base_of(p.n, {0, p.lambda, p.mu, p.nu}, {1, 1, 1, 2});
    default:
      return BundleSpec::over_base_of(p.n, {0, p.lambda, p.mu, p.nu}, {1, 1, 1, 1});
  }
}

Bidegree member_bidegree(const FamilyParams& p) {
  switch (p.degree) {
    case 1: return {6 * p.mu, 6};
    case 2: return {2 * p.nu, 4};
    default: return {p.theta, 3};
  }
}

static void require_valid(const FamilyParams& p) {
  auto bad = validate(p);
  if (!bad.empty()) throw std::invalid_argument("invalid family " + p.str() + ": " + bad.front());
}

DivisorClass anticanonical_class(const FamilyParams& p) {
  require_valid(p);
  switch (p.degree) {
    case 1: return {p.n - 1 + p.lambda - p.mu, 1};
    case 2: return {p.n - 1 + p.lambda + p.mu - p.nu, 1};
    default: return {p.n - 1 + p.lambda + p.mu + p.nu - p.theta, 1};
  }
}

Rational ample_threshold(const FamilyParams& p) {
  require_valid(p);
  switch (p.degree) {
    case 1: return p.lambda <= p.mu ? Rational(p.mu) : Rational(p.lambda);
    case 2: return p.nu >= 2 * p.mu ? Rational(p.nu, 2) : Rational(p.lambda);
    default: return Rational(p.nu);
  }
}

SheafM sheaf_M_bidegree(const FamilyParams& p) {
  require_valid(p);
  SheafM out;
  long n1 = p.n - 1;
  switch (p.degree) {
    case 1: {
      out.route = SheafRoute::Dp1;
      out.characteristic = 2;
      out.cited = {4 * p.mu - p.lambda - n1, 2};
      BundleSpec Z = BundleSpec::over_base_of(p.n, {0, p.lambda, 2 * p.mu}, {1, 1, 2});
      Bidegree L{3 * p.mu, 3};
      out.recomputed = canonical_bidegree(Z) + L * 2;
      break;
    }
    case 2: {
      if (2 * p.nu == 3 * p.mu && 3 * p.mu == 4 * p.lambda) {
        out.route = SheafRoute::Dp2Triple;
        out.characteristic = 3;
        out.cited = {p.nu - p.lambda - n1, 0};
        BundleSpec R = BundleSpec::over_base_of(p.n, {0, p.lambda, 3 * p.mu, p.nu}, {1, 1, 3, 2});
        Bidegree L{p.mu, 1};
        out.recomputed = adjunction_bidegree(R, {2 * p.nu, 4}) + L * 3;
      } else {
        out.route = SheafRoute::Dp2Main;
        out.characteristic = 2;
        out.cited = {2 * p.nu - p.lambda - p.mu - n1, 1};
        BundleSpec Z = BundleSpec::over_base_of(p.n, {0, p.lambda, p.mu}, {1, 1, 1});
        Bidegree L{p.nu, 2};
        out.recomputed = canonical_bidegree(Z) + L * 2;
      }
      break;
    }
    default: {
      out.cited = {p.theta - p.lambda - p.mu - n1, 0};
      Bidegree L{p.nu, 1};
      if (p.theta > 3 * p.nu) {
        out.route = SheafRoute::Dp3Scaled;
        out.characteristic = 3;
        BundleSpec R = BundleSpec::over_base_of(p.n, {0, p.lambda, p.mu, 3 * p.nu}, {1, 1, 1, 3});
        out.recomputed = adjunction_bidegree(R, {p.theta, 3}) + L * 3;
      } else if (p.theta == 3 * p.nu) {
        out.route = SheafRoute::Dp3Plain;
        out.characteristic = 3;
        BundleSpec Z = BundleSpec::over_base_of(p.n, {0, p.lambda, p.mu}, {1, 1, 1});
        out.recomputed = canonical_bidegree(Z) + L * 3;
      } else {
        out.route = SheafRoute::Dp3Double;
        out.characteristic = 2;
        BundleSpec R = BundleSpec::over_base_of(p.n, {0, p.lambda, p.mu, 2 * p.nu}, {1, 1, 1, 2});
        out.recomputed = adjunction_bidegree(R, {p.theta, 3}) + L * 2;
      }
      break;
    }
  }
  if (!(out.cited == out.recomputed))
    throw std::logic_error("associated-sheaf class mismatch for " + p.str() + ": cited " +
                           out.cited.str() + " vs recomputed " + out.recomputed.str());
  return out;
}

bool h0_positive(const BundleSpec& spec, Bidegree bd) { return h0_witness(spec, bd).has_value(); }

Verdict classify(const FamilyParams& p) {
  Verdict v;
  auto bad = validate(p);
  if (!bad.empty()) {
    v.tag = VerdictTag::Invalid;
    v.reasons = bad;
    return v;
  }
  v.anticanonical = anticanonical_class(p);

  if (p.degree == 3) {
    if (p.theta == 1 && p.lambda == 0 && p.mu == 0 && p.nu == 0) {
      v.tag = VerdictTag::ExceptionalRational;
      v.reasons.push_back("exception: hypersurface of bidegree (1,3), rational");
      return v;
    }
    if (p.theta == 3 && p.lambda == 1 && p.mu == 1 && p.nu == 1) {
      v.tag = VerdictTag::ExceptionalCubicBlowup;
      v.reasons.push_back("exception: blowup of a nonsingular cubic along a plane cubic curve");
      return v;
    }
  }

  SheafM M = sheaf_M_bidegree(p);
  v.sheaf_M = M.cited;
  long n1 = p.n - 1;
  long value = 0;
  std::string rule;
  switch (p.degree) {
    case 1:
      value = 4 * p.mu - p.lambda - n1;
      rule = "dp1-inequality: 4mu - lambda - (n-1) >= 0";
      break;
    case 2:
      if (M.route == SheafRoute::Dp2Triple) {
        value = p.nu - p.lambda - n1;
        rule = "dp2-triple-inequality: nu - lambda - (n-1) >= 0";
      } else {
        value = 2 * p.nu - p.lambda - p.mu - n1;
        rule = "dp2-inequality: 2nu - lambda - mu - (n-1) >= 0";
      }
      break;
    default:
      value = p.theta - p.lambda - p.mu - n1;
      rule = "dp3-inequality: theta - lambda - mu - (n-1) >= 0";
      break;
  }

  bool small_n = (p.degree == 1 && (p.n == 3 || p.n == 4)) || (p.degree != 1 && p.n == 3);
  bool not_ample = anticanonical_not_ample(p);

  if (value >= 0) {
    v.tag = VerdictTag::NotStablyRationalVG;
    v.reasons.push_back(rule);
    if (small_n) v.reasons.push_back("sufficient: small base dimension (n = " + std::to_string(p.n) + ")");
    if (not_ample) v.reasons.push_back("sufficient: anticanonical not ample");
    return v;
  }
  if (small_n || not_ample)
    throw std::logic_error("ampleness criterion inconsistent with inequality for " + p.str());
  v.tag = VerdictTag::Inconclusive;
  v.reasons.push_back("inequality fails: " + rule);
  return v;
}

std::string Verdict::to_json(const FamilyParams& p) const {
  nlohmann::json j;
  j["degree"] = p.degree;
  j["n"] = p.n;
  nlohmann::json pj;
  if (p.degree == 3) pj["theta"] = p.theta;
  pj["lambda"] = p.lambda;
  pj["mu"] = p.mu;
  if (p.degree != 1) pj["nu"] = p.nu;
  j["params"] = pj;
  j["verdict"] = to_string(tag);
  j["reasons"] = reasons;
  if (sheaf_M) j["sheaf_M"] = {sheaf_M->alpha, sheaf_M->beta};
  if (tag != VerdictTag::Invalid)
    j["anticanonical"] = anticanonical.str();
  return j.dump();
}

std::vector<std::pair<FamilyParams, Verdict>> enumerate_families(int degree, int n, long max_twist,
                                                                 long max_theta) {
  std::vector<std::pair<FamilyParams, Verdict>> out;
  auto consider = [&](const FamilyParams& p) {
    if (!validate(p).empty()) return;
    out.emplace_back(p, classify(p));
  };
  switch (degree) {
    case 1:
      for (long l = 0; l <= max_twist; ++l)
        for (long m = 0; m <= max_twist; ++m) consider(FamilyParams::dp1(n, l, m));
      break;
    case 2:
      for (long l = 0; l <= max_twist; ++l)
        for (long m = l; m <= max_twist; ++m)
          for (long v = 0; v <= max_twist; ++v) consider(FamilyParams::dp2(n, l, m, v));
      break;
    case 3:
      for (long t = 0; t <= max_theta; ++t)
        for (long l = 0; l <= max_twist; ++l)
          for (long m = l; m <= max_twist; ++m)
            for (long v = m; v <= max_twist; ++v) consider(FamilyParams::dp3(n, t, l, m, v));
      break;
    default:
      throw std::invalid_argument("degree must be 1, 2 or 3");
  }
  return out;
}

HeadlineFamily mainthm3_params(int case_id, int n, long m_or_d) {
  HeadlineFamily out;
  switch (case_id) {
    case 1:
      out.params = FamilyParams::dp2(n, 0, 0, m_or_d);
      if (2 * m_or_d < n - 1)
        out.warning = "below threshold: needs m >= (n-1)/2";
      break;
    case 2:
      out.params = FamilyParams::dp3(n, 3 * m_or_d, 0, 0, m_or_d);
      if (3 * m_or_d < n - 1)
        out.warning = "below threshold: needs m >= (n-1)/3";
      break;
    case 3:
      out.params = FamilyParams::dp3(n, m_or_d, 0, 0, 0);
      if (m_or_d < n - 1)
        out.warning = "below threshold: needs d >= n-1";
      break;
    default:
      throw std::invalid_argument("case must be 1, 2 or 3");
  }
  return out;
}

}  // namespace dpfib
