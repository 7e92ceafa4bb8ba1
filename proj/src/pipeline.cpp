#include "dpfib/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "dpfib/linalg.hpp"
#include "json.hpp"

namespace dpfib {

std::string to_string(MemberRoute r) {
  switch (r) {
    case MemberRoute::Dp1DoubleCover: return "dp1-double-cover";
    case MemberRoute::Dp2DoubleCover: return "dp2-double-cover";
    case MemberRoute::Dp2TripleCover: return "dp2-triple-cover";
    case MemberRoute::Dp3TripleCoverScaled: return "dp3-triple-cover-scaled";
    case MemberRoute::Dp3TripleCover: return "dp3-triple-cover";
    case MemberRoute::Dp3DoubleCover: return "dp3-double-cover";
  }
  return "?";
}

std::string to_string(Overall o) {
  switch (o) {
    case Overall::ObstructionWitnessed: return "ObstructionWitnessed";
    case Overall::PartialEvidence: return "PartialEvidence";
    case Overall::Failed: return "Failed";
  }
  return "?";
}

MemberRoute route_for(const FamilyParams& p) {
  switch (p.degree) {
    case 1: return MemberRoute::Dp1DoubleCover;
    case 2:
      return (2 * p.nu == 3 * p.mu && 3 * p.mu == 4 * p.lambda) ? MemberRoute::Dp2TripleCover
                                                                : MemberRoute::Dp2DoubleCover;
    default:
      if (p.theta > 3 * p.nu) return MemberRoute::Dp3TripleCoverScaled;
      if (p.theta == 3 * p.nu) return MemberRoute::Dp3TripleCover;
      return MemberRoute::Dp3DoubleCover;
  }
}

int route_characteristic(MemberRoute r) {
  switch (r) {
    case MemberRoute::Dp1DoubleCover:
    case MemberRoute::Dp2DoubleCover:
    case MemberRoute::Dp3DoubleCover: return 2;
    default: return 3;
  }
}

namespace {

Poly inject_fibers(const Poly& f, const BundleSpec& from, const BundleSpec& to,
                   const std::vector<int>& fiber_map) {
  Poly out(to.cox_ring(), f.field());
  for (auto& [m, c] : f.terms()) {
    Monomial nm(to.nvars());
    for (int i = 0; i <= from.base_dim(); ++i) nm.exps[to.u_var(i)] = m.exps[from.u_var(i)];
    for (int j = 0; j < from.fiber_count(); ++j)
      nm.exps[to.x_var(fiber_map[j])] = m.exps[from.x_var(j)];
    out.add_term(nm, c);
  }
  return out;
}

Poly random_u_form(const BundleSpec& spec, const GF& F, long degree, Rng& rng) {
  Poly f(spec.cox_ring(), F);
  for (const auto& m : monomial_basis(spec, Bidegree{degree, 0})) f.add_term(m, rng.uniform(F));
  return f;
}

// u-part coefficient of the given exact fiber exponent pattern.
Poly fiber_slot(const BundleSpec& spec, const Poly& f, const std::vector<int>& fiber_exps) {
  Poly out(spec.cox_ring(), f.field());
  for (auto& [m, c] : f.terms()) {
    bool match = true;
    for (int j = 0; j < spec.fiber_count(); ++j)
      if (m.exps[spec.x_var(j)] != fiber_exps[j]) {
        match = false;
        break;
      }
    if (!match) continue;
    Monomial nm = m;
    for (int j = 0; j < spec.fiber_count(); ++j) nm.exps[spec.x_var(j)] = 0;
    out.add_term(nm, c);
  }
  return out;
}

felem constant_of(const Poly& f) {
  return f.coeff(Monomial(f.ring()->nvars()));
}

Poly monomial_poly(const BundleSpec& spec, const GF& F, const std::vector<int>& fiber_exps,
                   felem c) {
  Poly out(spec.cox_ring(), F);
  Monomial m(spec.nvars());
  for (int j = 0; j < spec.fiber_count(); ++j) m.exps[spec.x_var(j)] = static_cast<std::uint8_t>(fiber_exps[j]);
  out.add_term(m, c);
  return out;
}

std::vector<Chart> weight_one_charts(const BundleSpec& spec, const std::vector<int>& fibers) {
  std::vector<Chart> out;
  for (int i = 0; i <= spec.base_dim(); ++i)
    for (int j : fibers) out.push_back(Chart{i, j});
  return out;
}

std::string fmt_pt(const GF& F, std::span<const felem> pt) {
  std::string s = "(";
  for (size_t i = 0; i < pt.size(); ++i) {
    if (i) s += ",";
    s += F.format(pt[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------- build

struct Draw {
  Rng rng;
  explicit Draw(std::uint64_t seed) : rng(seed) {}
};

void build_dp1(SpecialMember& m, Rng& rng) {
  const auto& p = m.params;
  const GF& F = *m.field;
  BundleSpec Z = BundleSpec::over_base_of(p.n, {0, p.lambda, 2 * p.mu}, {1, 1, 2});
  Poly f = random_poly(Z, F, {6 * p.mu, 6}, rng);

  felem c = constant_of(fiber_slot(Z, f, {0, 0, 3}));
  if (c == 0) throw genericity_error("z^3 coefficient vanished");
  if (p.lambda == p.mu) {
    felem beta = constant_of(fiber_slot(Z, f, {0, 4, 1}));
    if (beta != 0) {
      // clear the y^4 z slot: z -> z + t y^2 feeds t^2 c back into it,
      // so t^2 = beta / c
      felem t = F.pth_root(F.div(beta, c));
      Poly repl = Poly::variable(Z.cox_ring(), F, Z.x_var(2)) +
                  monomial_poly(Z, F, {0, 2, 0}, t);
      f = f.substituted(Z.x_var(2), repl);
      m.build_log.push_back("normalized: cleared y^4 z coefficient");
      if (constant_of(fiber_slot(Z, f, {0, 4, 1})) != 0)
        throw std::logic_error("normalization failed to clear y^4 z");
    }
    Poly a = fiber_slot(Z, f, {1, 5, 0});
    if (a.is_zero()) throw genericity_error("locus coefficient a vanished");
    LocusDescriptor loc;
    loc.name = "x=z=a=0";
    loc.zero_fibers = {0, 2};
    loc.u_equations = {a};
    loc.condition = ConditionKind::TransverseCusp;
    loc.chart_fiber = 1;
    loc.role_x_fiber = 0;
    loc.role_y_fiber = 2;
    m.loci.push_back(loc);
    m.named.emplace("a", a);
  }
  m.named.emplace("branch", f);
  m.named.emplace("cusp_coefficient", Poly::constant(Z.cox_ring(), F, c));

  m.ambient = ambient_bundle(p);
  m.member_bd = member_bidegree(p);
  Poly w2(m.ambient.cox_ring(), F);
  w2.add_term(Monomial::unit(m.ambient.nvars(), m.ambient.x_var(3), 2), F.one());
  m.defining = w2 + inject_fibers(f, Z, m.ambient, {0, 1, 2});
  m.sheaf_L = {3 * p.mu, 3};
  m.cover_degree = 2;
  m.census_base = Z;
  m.census_section = f;
  m.census_charts = weight_one_charts(Z, {0, 1});
}

void build_dp2_double(SpecialMember& m, Rng& rng) {
  const auto& p = m.params;
  const GF& F = *m.field;
  BundleSpec Z = BundleSpec::over_base_of(p.n, {0, p.lambda, p.mu}, {1, 1, 1});
  Poly f = random_poly(Z, F, {2 * p.nu, 4}, rng);

  if (p.nu == 2 * p.mu && p.mu > p.lambda) {
    Poly a = fiber_slot(Z, f, {1, 0, 3});
    Poly b = fiber_slot(Z, f, {0, 1, 3});
    if (a.is_zero() || b.is_zero()) throw genericity_error("locus coefficients a, b vanished");
    LocusDescriptor loc;
    loc.name = "x=y=a=b=0";
    loc.zero_fibers = {0, 1};
    loc.u_equations = {a, b};
    loc.condition = ConditionKind::TransverseLinear;
    loc.chart_fiber = 2;
    loc.role_x_fiber = 0;
    loc.role_y_fiber = 1;
    m.loci.push_back(loc);
    m.named.emplace("a", a);
    m.named.emplace("b", b);
  } else if (p.nu == 2 * p.mu && p.mu == p.lambda) {
    felem beta = constant_of(fiber_slot(Z, f, {0, 3, 1}));
    if (beta == 0) throw genericity_error("y^3 z coefficient vanished");
    felem delta = constant_of(fiber_slot(Z, f, {0, 1, 3}));
    if (delta != 0) {
      // clear the y z^3 slot: y -> y + sqrt(delta/beta) z
      felem t = F.pth_root(F.div(delta, beta));
      Poly repl = Poly::variable(Z.cox_ring(), F, Z.x_var(1)) +
                  monomial_poly(Z, F, {0, 0, 1}, t);
      f = f.substituted(Z.x_var(1), repl);
      m.build_log.push_back("normalized: cleared y z^3 coefficient");
    }
    Poly d = fiber_slot(Z, f, {1, 0, 3});
    if (d.is_zero()) throw genericity_error("locus coefficient d vanished");
    LocusDescriptor loc;
    loc.name = "x=y=d=0";
    loc.zero_fibers = {0, 1};
    loc.u_equations = {d};
    loc.condition = ConditionKind::TransverseCusp;
    loc.chart_fiber = 2;
    loc.role_x_fiber = 0;
    loc.role_y_fiber = 1;
    m.loci.push_back(loc);
    m.named.emplace("a", d);
  }
  m.named.emplace("branch", f);

  m.ambient = ambient_bundle(p);
  m.member_bd = member_bidegree(p);
  Poly w2(m.ambient.cox_ring(), F);
  w2.add_term(Monomial::unit(m.ambient.nvars(), m.ambient.x_var(3), 2), F.one());
  m.defining = w2 + inject_fibers(f, Z, m.ambient, {0, 1, 2});
  m.sheaf_L = {p.nu, 2};
  m.cover_degree = 2;
  m.census_base = Z;
  m.census_section = f;
  m.census_charts = weight_one_charts(Z, {0, 1, 2});
}

void build_dp2_triple(SpecialMember& m, Rng& rng) {
  const auto& p = m.params;
  const GF& F = *m.field;
  // f = f(u, x, y, w), drawn on the bundle the census runs over
  BundleSpec Rp = BundleSpec::over_base_of(p.n, {0, p.lambda, p.nu}, {1, 1, 2});
  Poly f = random_poly(Rp, F, {2 * p.nu, 4}, rng);
  felem alpha = constant_of(fiber_slot(Rp, f, {0, 0, 2}));
  if (alpha == 0) throw genericity_error("w^2 coefficient vanished");
  m.named.emplace("branch", f);

  m.ambient = ambient_bundle(p);
  m.member_bd = member_bidegree(p);
  Poly z3x(m.ambient.cox_ring(), F);
  Monomial mm(m.ambient.nvars());
  mm.exps[m.ambient.x_var(2)] = 3;
  mm.exps[m.ambient.x_var(0)] = 1;
  z3x.add_term(mm, F.one());
  m.defining = z3x + inject_fibers(f, Rp, m.ambient, {0, 1, 3});

  BundleSpec R = BundleSpec::over_base_of(p.n, {0, p.lambda, 3 * p.mu, p.nu}, {1, 1, 3, 2});
  Poly zbx(R.cox_ring(), F);
  Monomial zm(R.nvars());
  zm.exps[R.x_var(2)] = 1;
  zm.exps[R.x_var(0)] = 1;
  zbx.add_term(zm, F.one());
  m.named.emplace("cover_equation", zbx + inject_fibers(f, Rp, R, {0, 1, 3}));

  m.sheaf_L = {p.mu, 1};
  m.cover_degree = 3;
  m.census_base = Rp;
  m.census_section = f;
  m.census_charts = weight_one_charts(Rp, {0});  // the x != 0 part; x = 0 is structural
}

void build_dp3_scaled(SpecialMember& m, Rng& rng) {
  const auto& p = m.params;
  const GF& F = *m.field;
  BundleSpec Q = BundleSpec::over_base_of(p.n, {0, p.lambda, p.mu}, {1, 1, 1});
  Poly f = random_poly(Q, F, {p.theta, 3}, rng);
  Poly a = random_u_form(Q, F, p.theta - 3 * p.nu, rng);
  if (a.is_zero()) throw genericity_error("scaling form a vanished");
  m.named.emplace("branch", f);
  m.named.emplace("a", a);

  m.ambient = ambient_bundle(p);
  m.member_bd = member_bidegree(p);
  Poly w3 = inject_fibers(a, Q, m.ambient, {0, 1, 2});
  Poly wcube(m.ambient.cox_ring(), F);
  wcube.add_term(Monomial::unit(m.ambient.nvars(), m.ambient.x_var(3), 3), F.one());
  m.defining = w3 * wcube + inject_fibers(f, Q, m.ambient, {0, 1, 2});

  BundleSpec R = BundleSpec::over_base_of(p.n, {0, p.lambda, p.mu, 3 * p.nu}, {1, 1, 1, 3});
  Poly wb(R.cox_ring(), F);
  wb.add_term(Monomial::unit(R.nvars(), R.x_var(3), 1), F.one());
  m.named.emplace("cover_equation",
                  inject_fibers(a, Q, R, {0, 1, 2}) * wb + inject_fibers(f, Q, R, {0, 1, 2}));

  m.sheaf_L = {p.nu, 1};
  m.cover_degree = 3;
  m.census_base = Q;
  m.census_section = a * a * f;
  m.census_unit = a;
  m.census_charts = weight_one_charts(Q, {0, 1, 2});
}

void build_dp3_plain(SpecialMember& m, Rng& rng) {
  const auto& p = m.params;
  const GF& F = *m.field;
  BundleSpec Q = BundleSpec::over_base_of(p.n, {0, p.lambda, p.mu}, {1, 1, 1});
  Poly f = random_poly(Q, F, {p.theta, 3}, rng);

  if (p.nu == p.mu && p.mu > p.lambda) {
    Poly a = fiber_slot(Q, f, {1, 0, 2});
    Poly b = fiber_slot(Q, f, {0, 1, 2});
    if (a.is_zero() || b.is_zero()) throw genericity_error("locus coefficients a, b vanished");
    LocusDescriptor loc;
    loc.name = "x=y=a=b=0";
    loc.zero_fibers = {0, 1};
    loc.u_equations = {a, b};
    loc.condition = ConditionKind::TransverseLinear;
    loc.chart_fiber = 2;
    loc.role_x_fiber = 0;
    loc.role_y_fiber = 1;
    m.loci.push_back(loc);
    m.named.emplace("a", a);
    m.named.emplace("b", b);
  } else if (p.nu == p.mu && p.mu == p.lambda) {
    felem beta = constant_of(fiber_slot(Q, f, {0, 2, 1}));
    if (beta == 0) throw genericity_error("y^2 z coefficient vanished");
    felem gamma = constant_of(fiber_slot(Q, f, {0, 1, 2}));
    if (gamma != 0) {
      // clear the y z^2 slot: y -> y + (gamma/beta) z
      felem t = F.div(gamma, beta);
      Poly repl = Poly::variable(Q.cox_ring(), F, Q.x_var(1)) + monomial_poly(Q, F, {0, 0, 1}, t);
      f = f.substituted(Q.x_var(1), repl);
      m.build_log.push_back("normalized: cleared y z^2 coefficient");
      if (constant_of(fiber_slot(Q, f, {0, 1, 2})) != 0)
        throw std::logic_error("normalization failed to clear y z^2");
    }
    Poly c = fiber_slot(Q, f, {1, 0, 2});
    if (c.is_zero()) throw genericity_error("locus coefficient c vanished");
    LocusDescriptor loc;
    loc.name = "x=y=c=0";
    loc.zero_fibers = {0, 1};
    loc.u_equations = {c};
    loc.condition = ConditionKind::TransverseCusp;
    loc.chart_fiber = 2;
    loc.role_x_fiber = 0;
    loc.role_y_fiber = 1;
    m.loci.push_back(loc);
    m.named.emplace("a", c);
  }
  m.named.emplace("branch", f);

  m.ambient = ambient_bundle(p);
  m.member_bd = member_bidegree(p);
  Poly wcube(m.ambient.cox_ring(), F);
  wcube.add_term(Monomial::unit(m.ambient.nvars(), m.ambient.x_var(3), 3), F.one());
  m.defining = wcube + inject_fibers(f, Q, m.ambient, {0, 1, 2});
  m.sheaf_L = {p.nu, 1};
  m.cover_degree = 3;
  m.census_base = Q;
  m.census_section = f;
  m.census_charts = weight_one_charts(Q, {0, 1, 2});
}

void build_dp3_double(SpecialMember& m, Rng& rng) {
  const auto& p = m.params;
  const GF& F = *m.field;
  BundleSpec Q = BundleSpec::over_base_of(p.n, {0, p.lambda, p.mu}, {1, 1, 1});
  Poly f = random_poly(Q, F, {p.theta, 3}, rng);

  Poly a(Q.cox_ring(), F), b(Q.cox_ring(), F), c(Q.cox_ring(), F);
  if (p.theta == 2 * p.nu) {
    // every coefficient form is constant; normalize the pencil to g = x
    a = Poly::constant(Q.cox_ring(), F, F.one());
    m.build_log.push_back("constant coefficient forms: normalized to g = x");
  } else {
    a = random_u_form(Q, F, p.theta - 2 * p.nu, rng);
    if (a.is_zero()) throw genericity_error("coefficient form a vanished");
    if (p.theta - 2 * p.nu - p.lambda >= 0) {
      b = random_u_form(Q, F, p.theta - 2 * p.nu - p.lambda, rng);
      if (b.is_zero()) throw genericity_error("coefficient form b vanished");
    }
    if (p.theta - 2 * p.nu - p.mu >= 0) {
      c = random_u_form(Q, F, p.theta - 2 * p.nu - p.mu, rng);
      if (c.is_zero()) throw genericity_error("coefficient form c vanished");
    }
  }
  Poly g = a * Poly::variable(Q.cox_ring(), F, Q.x_var(0)) +
           b * Poly::variable(Q.cox_ring(), F, Q.x_var(1)) +
           c * Poly::variable(Q.cox_ring(), F, Q.x_var(2));
  m.named.emplace("branch", f);
  m.named.emplace("a", a);
  m.named.emplace("b", b);
  m.named.emplace("c", c);
  m.named.emplace("g", g);

  m.ambient = ambient_bundle(p);
  m.member_bd = member_bidegree(p);
  Poly wsq(m.ambient.cox_ring(), F);
  wsq.add_term(Monomial::unit(m.ambient.nvars(), m.ambient.x_var(3), 2), F.one());
  m.defining = wsq * inject_fibers(g, Q, m.ambient, {0, 1, 2}) +
               inject_fibers(f, Q, m.ambient, {0, 1, 2});

  BundleSpec R = BundleSpec::over_base_of(p.n, {0, p.lambda, p.mu, 2 * p.nu}, {1, 1, 1, 2});
  Poly wb(R.cox_ring(), F);
  wb.add_term(Monomial::unit(R.nvars(), R.x_var(3), 1), F.one());
  m.named.emplace("cover_equation",
                  wb * inject_fibers(g, Q, R, {0, 1, 2}) + inject_fibers(f, Q, R, {0, 1, 2}));

  m.sheaf_L = {p.nu, 1};
  m.cover_degree = 2;
  m.census_base = Q;
  m.census_section = g * f;
  m.census_unit = g;
  m.census_charts = weight_one_charts(Q, {0, 1, 2});
}

SpecialMember build_single(const FamilyParams& p, const GF& F, std::uint64_t seed) {
  MemberRoute route = route_for(p);
  if (F.p() != route_characteristic(route))
    throw std::invalid_argument("route " + to_string(route) + " needs characteristic " +
                                std::to_string(route_characteristic(route)));
  SpecialMember m;
  m.params = p;
  m.route = route;
  m.field = &F;
  m.seed = seed;
  Rng rng(seed);
  switch (route) {
    case MemberRoute::Dp1DoubleCover: build_dp1(m, rng); break;
    case MemberRoute::Dp2DoubleCover: build_dp2_double(m, rng); break;
    case MemberRoute::Dp2TripleCover: build_dp2_triple(m, rng); break;
    case MemberRoute::Dp3TripleCoverScaled: build_dp3_scaled(m, rng); break;
    case MemberRoute::Dp3TripleCover: build_dp3_plain(m, rng); break;
    case MemberRoute::Dp3DoubleCover: build_dp3_double(m, rng); break;
  }
  return m;
}

}  // namespace

SpecialMember build_special_member(const FamilyParams& p, const GF& F, std::uint64_t seed,
                                   int max_retries) {
  auto bad = validate(p);
  if (!bad.empty()) throw std::invalid_argument("invalid family: " + bad.front());
  Rng seeder(seed);
  std::vector<std::string> rejections;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::uint64_t s = attempt == 0 ? seed : seeder.next();
    try {
      SpecialMember m = build_single(p, F, s);
      for (auto& r : rejections) m.build_log.insert(m.build_log.begin(), r);
      return m;
    } catch (const genericity_error& e) {
      rejections.push_back("rejected draw: " + std::string(e.what()));
    }
  }
  throw genericity_error("genericity retries exhausted for " + p.str() +
                         "; advise a larger field than " + F.name());
}

// ---------------------------------------------------------------- battery

namespace {

std::vector<const GF*> extension_fields(const GF& F, int count) {
  std::vector<const GF*> out;
  int kmax = F.p() == 2 ? 10 : 6;
  for (int mult = 2; mult < 2 + count; ++mult)
    if (F.k() * mult <= kmax) out.push_back(&GF::get(F.p(), F.k() * mult));
  return out;
}

bool scan_fits(const GF& F, int dim, long long budget) {
  long long total = 1;
  for (int i = 0; i < dim; ++i) {
    total *= F.size();
    if (total > budget) return false;
  }
  return true;
}

Poly in_field(const Poly& f, const GF& F) {
  return &f.field() == &F ? f : f.mapped_into(F);
}

felem elem_in(const GF& from, const GF& to, felem a) {
  return &from == &to ? a : from.embedding_into(to)[a];
}

// partials of F in Cox coordinates, compiled for the scan field
struct GradientScanner {
  std::vector<CompiledPoly> partials;
  CompiledPoly value;
  PowTable pw;
  GradientScanner(const Poly& f, const GF& F)
      : value(CompiledPoly(f)), pw(F, 1) {
    int me = std::max(1, value.max_exponent());
    for (int v = 0; v < f.ring()->nvars(); ++v) {
      partials.emplace_back(f.derivative(v));
      me = std::max(me, partials.back().max_exponent());
    }
    pw = PowTable(F, me);
  }
  bool gradient_zero(const GF& F, std::span<const felem> pt) const {
    for (const auto& d : partials)
      if (d.eval(F, pw, pt) != 0) return false;
    return true;
  }
};

// Enumerates points of the ambient with the given fixed fiber values,
// ranging over all u-charts, and reports a singular witness of
// (defining = 0) if the full Cox gradient vanishes somewhere.
std::optional<std::string> singular_witness_on_fiber_locus(
    const BundleSpec& P, const Poly& defining, const GF& SF,
    const std::function<std::optional<felem>(std::span<const felem>, int)>& fiber_coord,
    long long budget) {
  Poly Fd = in_field(defining, SF);
  GradientScanner grad(Fd, SF);
  int nb = P.base_dim();
  if (!scan_fits(SF, nb, budget)) return std::nullopt;
  std::optional<std::string> witness;
  for (int i = 0; i <= nb && !witness; ++i) {
    enumerate_points(SF, nb, budget, [&](std::span<const felem> upt) {
      if (witness) return;
      std::vector<felem> lift(P.nvars(), 0);
      lift[P.u_var(i)] = 1;
      int t = 0;
      for (int k = 0; k <= nb; ++k)
        if (k != i) lift[P.u_var(k)] = upt[t++];
      for (int j = 0; j < P.fiber_count(); ++j) {
        auto v = fiber_coord(lift, j);
        if (!v) return;  // not on the locus for this u
        lift[P.x_var(j)] = *v;
      }
      if (grad.value.eval(SF, grad.pw, lift) != 0) return;  // not on X
      if (grad.gradient_zero(SF, lift))
        witness = fmt_pt(SF, lift) + " over " + SF.name();
    });
  }
  return witness;
}

// Rational points on (eqs = 0) within a chart of the bundle where the
// chart Jacobian of eqs drops below expected_rank; fixed_zero_fibers are
// pinned to zero (scanned dimensions shrink accordingly).
std::optional<std::string> chart_rank_defect_witness(const BundleSpec& base,
                                                     const std::vector<Poly>& eqs, const GF& SF,
                                                     const std::vector<Chart>& charts,
                                                     const std::vector<int>& fixed_zero_fibers,
                                                     int expected_rank, long long budget) {
  for (const auto& chart : charts) {
    std::vector<Poly> ceqs;
    for (const auto& e : eqs) ceqs.push_back(dehomogenize(base, in_field(e, SF), chart));
    auto ring = ceqs[0].ring();
    int dim = ring->nvars();
    std::vector<int> fixed;  // chart indices pinned to zero
    for (int j : fixed_zero_fibers) {
      if (j == chart.j) throw std::logic_error("locus fiber coincides with chart pivot");
      fixed.push_back(base.base_dim() + (j < chart.j ? j : j - 1));
    }
    std::vector<int> free_vars;
    for (int v = 0; v < dim; ++v)
      if (std::find(fixed.begin(), fixed.end(), v) == fixed.end()) free_vars.push_back(v);
    std::vector<std::vector<Poly>> jac;
    for (const auto& e : ceqs) {
      std::vector<Poly> row;
      for (int v = 0; v < dim; ++v) row.push_back(e.derivative(v));
      jac.push_back(std::move(row));
    }
    if (!scan_fits(SF, static_cast<int>(free_vars.size()), budget)) continue;
    std::optional<std::string> witness;
    enumerate_points(SF, static_cast<int>(free_vars.size()), budget,
                     [&](std::span<const felem> fp) {
                       if (witness) return;
                       std::vector<felem> pt(dim, 0);
                       for (size_t t = 0; t < free_vars.size(); ++t) pt[free_vars[t]] = fp[t];
                       for (const auto& e : ceqs)
                         if (e.eval(pt) != 0) return;
                       std::vector<std::vector<felem>> rows;
                       for (auto& row : jac) {
                         std::vector<felem> r;
                         for (auto& d : row) r.push_back(d.eval(pt));
                         rows.push_back(std::move(r));
                       }
                       if (rank_of(SF, std::move(rows)) < expected_rank)
                         witness = fmt_pt(SF, pt) + " in chart (" + std::to_string(chart.i) + "," +
                                   std::to_string(chart.j) + ") over " + SF.name();
                     });
    if (witness) return witness;
  }
  return std::nullopt;
}

// Exact check for common roots of binary forms (base P^1 only): the
// forms share a projective root iff their dehomogenizations at u0 = 1
// share a root or all forms vanish at (0:1).
bool binary_forms_have_common_root(const std::vector<Poly>& forms, const BundleSpec& spec) {
  const GF& F = forms[0].field();
  auto univariate = [&](const Poly& f, int var) {
    std::vector<felem> coeffs;
    for (auto& [m, c] : f.terms()) {
      int e = m.exps[var];
      if (static_cast<int>(coeffs.size()) <= e) coeffs.resize(e + 1, 0);
      coeffs[e] = F.add(coeffs[e], c);
    }
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    return coeffs;
  };
  auto gcd_uni = [&](std::vector<felem> a, std::vector<felem> b) {
    auto trim = [](std::vector<felem>& v) {
      while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
      // a mod b
      while (a.size() >= b.size() && !a.empty()) {
        felem q = F.div(a.back(), b.back());
        size_t off = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i)
          a[off + i] = F.sub(a[off + i], F.mul(q, b[i]));
        trim(a);
      }
      std::swap(a, b);
    }
    return a;
  };
  // affine chart u0 = 1 (univariate in u1)
  std::vector<felem> g;
  bool first = true;
  for (const auto& f : forms) {
    auto uni = univariate(f.at(spec.u_var(0), F.one()), spec.u_var(1));
    if (uni.empty()) continue;  // identically zero after restriction: ignore, handled by caller
    g = first ? uni : gcd_uni(g, uni);
    first = false;
  }
  if (!first && g.size() >= 2) return true;  // nonconstant gcd: affine common root
  // the point (0:1): all forms vanish there iff none has a pure u1-power term
  bool all_vanish_at_infinity = true;
  for (const auto& f : forms) {
    if (f.is_zero()) continue;
    long deg = 0;
    for (auto& [m, c] : f.terms()) deg = std::max<long>(deg, m.degree());
    Monomial top(f.ring()->nvars());
    top.exps[spec.u_var(1)] = static_cast<std::uint8_t>(deg);
    if (f.coeff(top) != 0) all_vanish_at_infinity = false;
  }
  return all_vanish_at_infinity;
}

struct CensusOutcome {
  std::vector<ChartCensusSummary> summaries;
  std::vector<CritRecord> base_records;
  std::map<std::string, int> unique_counts;
  std::vector<std::string> genericity_failures;
  std::vector<std::string> hard_failures;
};

CensusOutcome census_branch(const SpecialMember& m, long long budget) {
  CensusOutcome out;
  const GF& F0 = *m.field;
  std::vector<const GF*> fields = {&F0};
  for (const GF* E : extension_fields(F0, 2)) fields.push_back(E);

  int chart_dim = m.census_base.nvars() - 2;
  for (const GF* SFp : fields) {
    const GF& SF = *SFp;
    if (!scan_fits(SF, chart_dim, budget)) continue;
    Poly section = in_field(m.census_section, SF);
    std::optional<Poly> unit;
    if (m.census_unit) unit = in_field(*m.census_unit, SF);
    std::vector<std::vector<Poly>> locus_eqs;
    for (const auto& L : m.loci) {
      std::vector<Poly> eqs;
      for (const auto& e : L.u_equations) eqs.push_back(in_field(e, SF));
      locus_eqs.push_back(std::move(eqs));
    }

    // canonical lift -> (classification, chart first seen)
    std::map<Point, CritRecord> seen;
    for (const auto& chart : m.census_charts) {
      Poly fc = dehomogenize(m.census_base, section, chart);
      std::optional<Poly> uc;
      if (unit) uc = dehomogenize(m.census_base, *unit, chart);
      ChartCensusSummary sum;
      sum.chart = chart;
      sum.field = SF.name();

      auto records = critical_points_census(fc, budget, 4);
      for (auto& rec : records) {
        if (uc && uc->eval(rec.point) == 0) continue;  // handled structurally
        Point lift = lift_from_chart(m.census_base, chart, rec.point);
        auto canon = canonical_lift(m.census_base, SF, lift);
        if (!canon) throw std::logic_error("census point off weight-1 charts");
        // documented locus?
        bool routed = false;
        std::string locus_name;
        for (size_t li = 0; li < m.loci.size(); ++li) {
          bool on = true;
          for (int j : m.loci[li].zero_fibers)
            if ((*canon)[m.census_base.x_var(j)] != 0) {
              on = false;
              break;
            }
          if (on)
            for (const auto& e : locus_eqs[li])
              if (e.eval(*canon) != 0) {
                on = false;
                break;
              }
          if (on) {
            routed = true;
            locus_name = m.loci[li].name;
            break;
          }
        }
        CritRecord full = rec;
        full.chart = chart;
        full.on_documented_locus = routed;
        if (!routed && full.cls == CritClass::Degenerate) {
          // recheck with the deeper default cap before reporting
          full = classify_critical_point(fc, rec.point);
          full.chart = chart;
        }
        switch (full.cls) {
          case CritClass::Nondegenerate: sum.nondegenerate++; break;
          case CritClass::AlmostNondegenerate: sum.almost++; break;
          case CritClass::Degenerate:
            if (routed)
              sum.degenerate_routed++;
            else
              sum.degenerate_bad++;
            break;
          case CritClass::NotCritical: break;
        }
        if (!routed && full.cls == CritClass::Degenerate)
          out.genericity_failures.push_back("degenerate critical point off documented loci at " +
                                            fmt_pt(SF, full.point) + " in chart (" +
                                            std::to_string(chart.i) + "," +
                                            std::to_string(chart.j) + ") over " + SF.name());
        auto [it, inserted] = seen.emplace(*canon, full);
        if (!inserted && it->second.cls != full.cls)
          out.hard_failures.push_back(
              "chart-inconsistent classification at " + fmt_pt(SF, *canon) + ": " +
              to_string(it->second.cls) + " vs " + to_string(full.cls));
      }
      out.summaries.push_back(sum);
    }
    out.unique_counts[SF.name()] = static_cast<int>(seen.size());
    if (SFp == &F0)
      for (auto& [pt, rec] : seen) out.base_records.push_back(rec);
  }
  return out;
}

CheckOutcome smoothness_check(const SpecialMember& m, long long budget) {
  CheckOutcome chk;
  chk.name = "smoothness-outside-cover-locus";
  chk.genericity_sensitive = true;
  chk.partial = true;
  const GF& F = *m.field;
  const BundleSpec& P = m.ambient;
  std::vector<const GF*> fields = {&F};
  for (const GF* E : extension_fields(F, 1)) fields.push_back(E);

  switch (m.route) {
    case MemberRoute::Dp1DoubleCover: {
      // structural witness: dF/dz = c z^2 away from (x, y)
      Poly dz = m.defining.derivative(P.x_var(2));
      Poly reduced(P.cox_ring(), F);
      for (auto& [mm, c] : dz.terms())
        if (mm.exps[P.x_var(0)] == 0 && mm.exps[P.x_var(1)] == 0) reduced.add_term(mm, c);
      felem c = constant_of(m.named.at("cusp_coefficient"));
      Poly expect = monomial_poly(P, F, {0, 0, 2, 0}, F.mul(F.from_int(3), c));
      if (reduced == expect && c != 0) {
        chk.detail = "z-partial restricts to a nonzero multiple of z^2 on (x=y=0); ";
      } else {
        chk.pass = false;
        chk.detail = "z-partial degenerates on (x=y=0): " + reduced.str();
        return chk;
      }
      for (const GF* SF : fields) {
        felem cs = elem_in(F, *SF, c);
        felem w = SF->pth_root(cs);  // w^2 = c
        auto witness = singular_witness_on_fiber_locus(
            P, m.defining, *SF,
            [&](std::span<const felem>, int j) -> std::optional<felem> {
              if (j == 2) return felem(1);
              if (j == 3) return w;
              return felem(0);
            },
            budget);
        if (witness) {
          chk.pass = false;
          chk.detail = "singular point on (x=y=0) at " + *witness;
          return chk;
        }
      }
      chk.pass = true;
      chk.detail += "no singular rational point on (x=y=0) over base field and one extension";
      return chk;
    }
    case MemberRoute::Dp2DoubleCover:
    case MemberRoute::Dp3TripleCover: {
      // the cover base is already nonsingular and X misses the ambient
      // singular section: every branch monomial carries a fiber variable
      chk.pass = true;
      chk.partial = false;
      chk.genericity_sensitive = false;
      chk.detail = "excluded locus empty: X avoids (x=y=z=0)";
      return chk;
    }
    case MemberRoute::Dp2TripleCover: {
      Poly dx = m.defining.derivative(P.x_var(0));
      Poly reduced(P.cox_ring(), F);
      for (auto& [mm, c] : dx.terms())
        if (mm.exps[P.x_var(0)] == 0 && mm.exps[P.x_var(1)] == 0 && mm.exps[P.x_var(3)] == 0)
          reduced.add_term(mm, c);
      if (!(reduced == monomial_poly(P, F, {0, 0, 3, 0}, F.one()))) {
        chk.pass = false;
        chk.detail = "x-partial on (x=y=w=0) is not z^3: " + reduced.str();
        return chk;
      }
      for (const GF* SF : fields) {
        auto witness = singular_witness_on_fiber_locus(
            P, m.defining, *SF,
            [&](std::span<const felem>, int j) -> std::optional<felem> {
              return j == 2 ? std::optional<felem>(1) : std::optional<felem>(0);
            },
            budget);
        if (witness) {
          chk.pass = false;
          chk.detail = "singular point on (x=y=w=0) at " + *witness;
          return chk;
        }
      }
      chk.pass = true;
      chk.detail = "x-partial is z^3 on (x=y=w=0); no singular rational point found";
      return chk;
    }
    case MemberRoute::Dp3TripleCoverScaled: {
      for (const GF* SF : fields) {
        auto witness = singular_witness_on_fiber_locus(
            P, m.defining, *SF,
            [&](std::span<const felem>, int j) -> std::optional<felem> {
              return j == 3 ? std::optional<felem>(1) : std::optional<felem>(0);
            },
            budget);
        if (witness) {
          chk.pass = false;
          chk.detail = "singular point on (x=y=z=0) at " + *witness;
          return chk;
        }
      }
      chk.pass = true;
      chk.detail = "no singular rational point on (x=y=z=0) over base field and one extension";
      return chk;
    }
    case MemberRoute::Dp3DoubleCover: {
      // exact emptiness of (a=b=c=0) on P^1 bases; scans elsewhere
      std::vector<Poly> forms;
      for (const char* key : {"a", "b", "c"}) {
        const Poly& f = m.named.at(key);
        if (!f.is_zero() && f.total_degree() == 0) {
          chk.detail = "a coefficient form is a nonzero constant; ";
          forms.clear();
          break;
        }
        forms.push_back(f);
      }
      if (!forms.empty() && m.params.n == 3) {
        if (binary_forms_have_common_root(forms, m.census_base)) {
          chk.pass = false;
          chk.detail = "coefficient forms a, b, c share a projective root (exact check)";
          return chk;
        }
        chk.detail = "no common root of a, b, c on the base (exact check); ";
      }
      for (const GF* SF : fields) {
        auto witness = singular_witness_on_fiber_locus(
            P, m.defining, *SF,
            [&](std::span<const felem>, int j) -> std::optional<felem> {
              return j == 3 ? std::optional<felem>(1) : std::optional<felem>(0);
            },
            budget);
        if (witness) {
          chk.pass = false;
          chk.detail = "singular point on (x=y=z=0) at " + *witness;
          return chk;
        }
      }
      chk.pass = true;
      chk.detail += "no singular rational point on (x=y=z=0)";
      return chk;
    }
  }
  chk.pass = false;
  chk.detail = "unhandled route";
  return chk;
}

CheckOutcome cover_base_check(const SpecialMember& m, long long budget) {
  CheckOutcome chk;
  chk.name = "cover-base-nonsingular";
  chk.partial = true;
  chk.genericity_sensitive = true;
  const GF& F = *m.field;
  std::vector<const GF*> fields = {&F};
  for (const GF* E : extension_fields(F, 1)) fields.push_back(E);

  switch (m.route) {
    case MemberRoute::Dp1DoubleCover: {
      chk.partial = false;
      chk.genericity_sensitive = false;
      chk.pass = true;
      chk.detail = "cover base is the toric bundle itself; smooth off (x=y=0) by construction";
      return chk;
    }
    case MemberRoute::Dp2DoubleCover:
    case MemberRoute::Dp3TripleCover: {
      chk.partial = false;
      chk.genericity_sensitive = false;
      chk.pass = true;
      chk.detail = "cover base is a projective-space bundle, nonsingular";
      return chk;
    }
    case MemberRoute::Dp2TripleCover: {
      // scan (x = 0) slice of the cover hypersurface through the y-charts
      const Poly& Zb = m.named.at("cover_equation");
      BundleSpec R = BundleSpec::over_base_of(m.params.n,
                                              {0, m.params.lambda, 3 * m.params.mu, m.params.nu},
                                              {1, 1, 3, 2});
      for (const GF* SF : fields) {
        Poly Zs = in_field(Zb, *SF);
        for (int i = 0; i <= R.base_dim(); ++i) {
          Chart chart{i, 1};
          Poly zc = dehomogenize(R, Zs, chart);
          auto ring = zc.ring();
          int dim = ring->nvars();
          int x_idx = R.base_dim() + 0;  // fiber x in chart coordinates
          std::vector<Poly> grads;
          for (int v = 0; v < dim; ++v) grads.push_back(zc.derivative(v));
          std::vector<int> free_vars;
          for (int v = 0; v < dim; ++v)
            if (v != x_idx) free_vars.push_back(v);
          if (!scan_fits(*SF, static_cast<int>(free_vars.size()), budget)) continue;
          std::optional<std::string> witness;
          enumerate_points(*SF, static_cast<int>(free_vars.size()), budget,
                           [&](std::span<const felem> fp) {
                             if (witness) return;
                             std::vector<felem> pt(dim, 0);
                             for (size_t t = 0; t < free_vars.size(); ++t)
                               pt[free_vars[t]] = fp[t];
                             if (zc.eval(pt) != 0) return;
                             for (auto& d : grads)
                               if (d.eval(pt) != 0) return;
                             witness = fmt_pt(*SF, pt);
                           });
          if (witness) {
            chk.pass = false;
            chk.detail = "singular point of the cover base on (x=0) at " + *witness + " over " +
                         SF->name();
            return chk;
          }
        }
      }
      chk.pass = true;
      chk.detail =
          "cover equation is linear in the branch coordinate on (x!=0); no singular rational "
          "point on (x=0) slices";
      return chk;
    }
    case MemberRoute::Dp3TripleCoverScaled: {
      for (const GF* SF : fields) {
        auto witness = chart_rank_defect_witness(m.census_base,
                                                 {m.named.at("a"), m.named.at("branch")}, *SF,
                                                 m.census_charts, {}, 2, budget);
        if (witness) {
          chk.pass = false;
          chk.detail = "(a = f = 0) fails the rank-2 criterion at " + *witness;
          return chk;
        }
      }
      chk.pass = true;
      chk.detail = "(a = f = 0) nonsingular at every rational point scanned";
      return chk;
    }
    case MemberRoute::Dp3DoubleCover: {
      if (m.params.theta == 2 * m.params.nu) {
        chk.partial = false;
        chk.genericity_sensitive = false;
        chk.pass = true;
        chk.detail = "cover base is isomorphic to the projective-space bundle";
        return chk;
      }
      for (const GF* SF : fields) {
        auto witness = chart_rank_defect_witness(m.census_base,
                                                 {m.named.at("g"), m.named.at("branch")}, *SF,
                                                 m.census_charts, {}, 2, budget);
        if (witness) {
          chk.pass = false;
          chk.detail = "(g = f = 0) fails the rank-2 criterion at " + *witness;
          return chk;
        }
      }
      chk.pass = true;
      chk.detail = "(g = f = 0) nonsingular at every rational point scanned";
      return chk;
    }
  }
  chk.pass = false;
  chk.detail = "unhandled route";
  return chk;
}

int chart_index_of_fiber(const BundleSpec& base, const Chart& chart, int fiber) {
  if (fiber == chart.j) throw std::logic_error("fiber is the chart pivot");
  return base.base_dim() + (fiber < chart.j ? fiber : fiber - 1);
}

}  // namespace

std::string ChartCensusSummary::to_json() const {
  nlohmann::json j;
  j["field"] = field;
  j["chart"] = {chart.i, chart.j};
  j["counts"]["nondegenerate"] = nondegenerate;
  j["counts"]["almost"] = almost;
  j["counts"]["degenerate_routed"] = degenerate_routed;
  j["counts"]["degenerate_unexplained"] = degenerate_bad;
  return j.dump();
}

bool PipelineReport::checks_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return failures.empty();
}

bool PipelineReport::failures_only_genericity() const {
  for (const auto& c : checks)
    if (!c.pass && !c.genericity_sensitive) return false;
  // hard failures recorded directly in `failures` are marked by prefix
  for (const auto& f : failures)
    if (f.rfind("hard:", 0) == 0) return false;
  return true;
}

PipelineReport run_battery(const SpecialMember& m, long long budget) {
  PipelineReport rep;
  rep.params = m.params;
  rep.route = m.route;
  rep.field = m.field->name();
  rep.seed = m.seed;
  rep.build_log = m.build_log;

  rep.checks.push_back(smoothness_check(m, budget));
  rep.checks.push_back(cover_base_check(m, budget));

  // branch-section census with classification
  CensusOutcome census = census_branch(m, budget);
  rep.census = census.summaries;
  rep.census_records = census.base_records;
  CheckOutcome cen;
  cen.name = "critical-point-census";
  cen.partial = true;
  cen.genericity_sensitive = true;
  cen.pass = census.genericity_failures.empty() && census.hard_failures.empty();
  if (!census.genericity_failures.empty()) cen.detail = census.genericity_failures.front();
  for (const auto& h : census.hard_failures) rep.failures.push_back("hard: " + h);
  if (cen.pass) {
    cen.detail = "all critical points (almost) nondegenerate or on documented loci;";
    for (auto& [fname, count] : census.unique_counts)
      cen.detail += " " + fname + ": " + std::to_string(count);
  }
  rep.checks.push_back(cen);

  // rational points embed into extensions of the scan field, so no
  // extension census may see fewer critical points than the base one
  {
    auto base_it = census.unique_counts.find(m.field->name());
    if (base_it != census.unique_counts.end()) {
      for (auto& [fname, count] : census.unique_counts)
        if (count < base_it->second)
          rep.failures.push_back("hard: critical-point count dropped from " +
                                 m.field->name() + " to " + fname);
    }
  }

  // structural conditions on documented loci
  CheckOutcome locus_chk;
  locus_chk.name = "locus-structure";
  locus_chk.pass = true;
  locus_chk.genericity_sensitive = true;
  locus_chk.partial = true;
  for (const auto& L : m.loci) {
    for (int i = 0; i <= m.census_base.base_dim(); ++i) {
      Chart chart{i, L.chart_fiber};
      Poly fc = dehomogenize(m.census_base, m.census_section, chart);
      int xv = chart_index_of_fiber(m.census_base, chart, L.role_x_fiber);
      int yv = chart_index_of_fiber(m.census_base, chart, L.role_y_fiber);
      ConditionReport cr = L.condition == ConditionKind::TransverseCusp
                               ? check_condition_cusp(fc, xv, yv, budget)
                               : check_condition_linear(fc, xv, yv, budget);
      if (!cr.pass) {
        locus_chk.pass = false;
        for (const auto& c : cr.checks)
          if (!c.pass) {
            locus_chk.detail = "locus " + L.name + ", chart (" + std::to_string(i) + "," +
                               std::to_string(L.chart_fiber) + "): " + c.name + ": " + c.evidence;
            if (!c.genericity_sensitive) rep.failures.push_back("hard: " + locus_chk.detail);
            break;
          }
      }
      rep.conditions.push_back(std::move(cr));
    }
  }
  if (locus_chk.pass)
    locus_chk.detail = m.loci.empty() ? "no documented positive-dimensional loci"
                                      : "all documented loci satisfy their structural condition";
  rep.checks.push_back(locus_chk);

  // associated-sheaf class: cited formula vs canonical/adjunction route
  CheckOutcome sheaf;
  sheaf.name = "associated-sheaf-class";
  try {
    SheafM M = sheaf_M_bidegree(m.params);
    rep.sheaf_M = M.cited;
    rep.sheaf_M_recomputed = M.recomputed;
    sheaf.pass = true;
    sheaf.detail = "both routes give " + M.cited.str();
  } catch (const std::exception& e) {
    sheaf.pass = false;
    sheaf.detail = e.what();
    rep.failures.push_back("hard: " + std::string(e.what()));
  }
  rep.checks.push_back(sheaf);

  // global sections of the associated sheaf
  CheckOutcome h0;
  h0.name = "h0-nonzero";
  if (sheaf.pass) {
    auto wit = h0_witness(m.ambient, rep.sheaf_M);
    rep.h0_nonzero = wit.has_value();
    if (wit) {
      Poly w(m.ambient.cox_ring(), *m.field);
      w.add_term(*wit, m.field->one());
      rep.h0_witness_monomial = w.str();
      h0.pass = true;
      h0.detail = "witness monomial " + rep.h0_witness_monomial;
    } else {
      Verdict v = classify(m.params);
      if (v.tag == VerdictTag::NotStablyRationalVG) {
        h0.pass = false;
        h0.detail = "theorem inequality holds but no section witness found";
        rep.failures.push_back("hard: " + h0.detail);
      } else {
        h0.pass = true;  // informative only: family is not in the theorem range
        h0.detail = "graded piece empty; family outside the theorem range";
      }
    }
  } else {
    h0.pass = false;
    h0.detail = "skipped: sheaf class inconsistent";
  }
  rep.checks.push_back(h0);

  if (!rep.checks_pass())
    rep.overall = Overall::Failed;
  else if (rep.h0_nonzero)
    rep.overall = Overall::ObstructionWitnessed;
  else
    rep.overall = Overall::PartialEvidence;
  return rep;
}

PipelineReport run_pipeline(const FamilyParams& p, const GF& F, std::uint64_t seed,
                            long long budget, int max_retries) {
  Verdict v = classify(p);
  if (v.tag == VerdictTag::Invalid)
    throw pipeline_not_applicable("invalid family: " + v.reasons.front());
  if (v.tag == VerdictTag::ExceptionalRational || v.tag == VerdictTag::ExceptionalCubicBlowup)
    throw pipeline_not_applicable("exceptional family (" + to_string(v.tag) +
                                  "); the degeneration analysis does not apply");

  Rng seeder(seed);
  std::vector<std::string> retry_log;
  for (int attempt = 1; attempt <= max_retries; ++attempt) {
    std::uint64_t s = attempt == 1 ? seed : seeder.next();
    SpecialMember member;
    try {
      member = build_single(p, F, s);
    } catch (const genericity_error& e) {
      retry_log.push_back("attempt " + std::to_string(attempt) + ": " + e.what());
      continue;
    }
    PipelineReport rep = run_battery(member, budget);
    rep.attempts = attempt;
    for (auto& r : retry_log) rep.build_log.insert(rep.build_log.begin(), r);
    if (rep.checks_pass()) return rep;
    if (!rep.failures_only_genericity()) return rep;  // soundness failure, do not retry
    std::string why = "attempt " + std::to_string(attempt) + ": genericity rejection";
    for (const auto& c : rep.checks)
      if (!c.pass) {
        why += " (" + c.name + ": " + c.detail + ")";
        break;
      }
    retry_log.push_back(why);
  }
  PipelineReport rep;
  rep.params = p;
  rep.route = route_for(p);
  rep.field = F.name();
  rep.seed = seed;
  rep.attempts = max_retries;
  rep.build_log = retry_log;
  rep.overall = Overall::Failed;
  rep.failures.push_back("genericity retries exhausted; advise a larger field than " + F.name());
  return rep;
}

SpecialMember build_sabotaged_member(Sabotage kind, const GF& F, std::uint64_t seed) {
  switch (kind) {
    case Sabotage::KillCuspCoefficient: {
      SpecialMember m = build_special_member(FamilyParams::dp1(3, 0, 1), F, seed);
      const BundleSpec& Z = m.census_base;
      Poly f = m.named.at("branch");
      felem c = constant_of(fiber_slot(Z, f, {0, 0, 3}));
      f = f - monomial_poly(Z, F, {0, 0, 3}, c);
      m.named.insert_or_assign("branch", f);
      m.named.insert_or_assign("cusp_coefficient", Poly::constant(Z.cox_ring(), F, 0));
      Poly w2(m.ambient.cox_ring(), F);
      w2.add_term(Monomial::unit(m.ambient.nvars(), m.ambient.x_var(3), 2), F.one());
      m.defining = w2 + inject_fibers(f, Z, m.ambient, {0, 1, 2});
      m.census_section = f;
      m.build_log.push_back("sabotage: cleared the z^3 coefficient");
      return m;
    }
    case Sabotage::KillLocusEquation: {
      SpecialMember m = build_special_member(FamilyParams::dp1(3, 1, 1), F, seed);
      const BundleSpec& Z = m.census_base;
      Poly f = m.named.at("branch");
      Poly a = fiber_slot(Z, f, {1, 5, 0});
      Poly xy5(Z.cox_ring(), F);
      Monomial mm(Z.nvars());
      mm.exps[Z.x_var(0)] = 1;
      mm.exps[Z.x_var(1)] = 5;
      xy5.add_term(mm, F.one());
      f = f - a * xy5;
      m.named.insert_or_assign("branch", f);
      m.named.insert_or_assign("a", Poly(Z.cox_ring(), F));
      if (!m.loci.empty()) m.loci[0].u_equations = {Poly(Z.cox_ring(), F)};
      Poly w2(m.ambient.cox_ring(), F);
      w2.add_term(Monomial::unit(m.ambient.nvars(), m.ambient.x_var(3), 2), F.one());
      m.defining = w2 + inject_fibers(f, Z, m.ambient, {0, 1, 2});
      m.census_section = f;
      m.build_log.push_back("sabotage: cleared the locus coefficient a");
      return m;
    }
    case Sabotage::SharedRootLinears: {
      SpecialMember m = build_special_member(FamilyParams::dp3(3, 5, 0, 0, 2), F, seed);
      const BundleSpec& Q = m.census_base;
      Poly u0 = Poly::variable(Q.cox_ring(), F, Q.u_var(0));
      Poly g = u0 * (Poly::variable(Q.cox_ring(), F, Q.x_var(0)) +
                     Poly::variable(Q.cox_ring(), F, Q.x_var(1)) +
                     Poly::variable(Q.cox_ring(), F, Q.x_var(2)));
      m.named.insert_or_assign("a", u0);
      m.named.insert_or_assign("b", u0);
      m.named.insert_or_assign("c", u0);
      m.named.insert_or_assign("g", g);
      Poly f = m.named.at("branch");
      Poly wsq(m.ambient.cox_ring(), F);
      wsq.add_term(Monomial::unit(m.ambient.nvars(), m.ambient.x_var(3), 2), F.one());
      m.defining = wsq * inject_fibers(g, Q, m.ambient, {0, 1, 2}) +
                   inject_fibers(f, Q, m.ambient, {0, 1, 2});
      m.census_section = g * f;
      m.census_unit = g;
      m.build_log.push_back("sabotage: coefficient forms share the root (0:1)");
      return m;
    }
  }
  throw std::invalid_argument("unknown sabotage kind");
}

std::string PipelineReport::to_json() const {
  nlohmann::json j;
  j["params"] = params.str();
  j["route"] = dpfib::to_string(route);
  j["field"] = field;
  j["seed"] = seed;
  j["attempts"] = attempts;
  nlohmann::json checks_j = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["partial"] = c.partial;
    cj["detail"] = c.detail;
    checks_j.push_back(cj);
  }
  j["checks"] = checks_j;
  nlohmann::json cen = nlohmann::json::array();
  for (const auto& s : census) cen.push_back(nlohmann::json::parse(s.to_json()));
  j["census"] = cen;
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : census_records) {
    nlohmann::json rj;
    rj["point"] = r.point;
    rj["class"] = to_string(r.cls);
    rj["hessian_rank"] = r.hessian_rank;
    if (r.local_length) rj["local_length"] = *r.local_length;
    rj["chart"] = {r.chart.i, r.chart.j};
    rj["on_documented_locus"] = r.on_documented_locus;
    recs.push_back(rj);
  }
  j["census_records"] = recs;
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : conditions) conds.push_back(nlohmann::json::parse(c.to_json()));
  j["conditions"] = conds;
  j["sheaf_M"] = {sheaf_M.alpha, sheaf_M.beta};
  j["sheaf_M_recomputed"] = {sheaf_M_recomputed.alpha, sheaf_M_recomputed.beta};
  j["h0_nonzero"] = h0_nonzero;
  j["h0_witness"] = h0_witness_monomial;
  j["partial_evidence"] = partial_evidence;
  j["overall"] = dpfib::to_string(overall);
  j["failures"] = failures;
  j["build_log"] = build_log;
  return j.dump();
}

}  // namespace dpfib
