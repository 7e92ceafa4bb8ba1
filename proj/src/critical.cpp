#include "dpfib/critical.hpp"

#include <algorithm>
#include <functional>
#include <thread>

#include "dpfib/linalg.hpp"
#include "json.hpp"

namespace dpfib {

std::string to_string(CritClass c) {
  switch (c) {
    case CritClass::NotCritical: return "not-critical";
    case CritClass::Nondegenerate: return "nondegenerate";
    case CritClass::AlmostNondegenerate: return "almost-nondegenerate";
    case CritClass::Degenerate: return "degenerate";
  }
  return "?";
}

int HessianMatrix::rank(const GF& F) const {
  std::vector<std::vector<felem>> rows(n, std::vector<felem>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows[i][j] = at(i, j);
  return rank_of(F, std::move(rows));
}

HessianMatrix hessian_at(const Poly& f, std::span<const felem> point) {
  int n = f.ring()->nvars();
  HessianMatrix H;
  H.n = n;
  H.entries.assign(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    Poly di = f.derivative(i);
    for (int j = i; j < n; ++j) {
      felem v = di.derivative(j).eval(point);
      H.entries[i * n + j] = v;
      H.entries[j * n + i] = v;
    }
  }
  return H;
}

namespace {

// Monomials of degree < bound in n variables, ascending lex.
std::vector<Monomial> jet_monomials(int n, int bound) {
  std::vector<Monomial> out;
  Monomial cur(n);
  // depth-first over exponents
  std::function<void(int, int)> rec = [&](int var, int deg_left) {
    if (var == n) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= deg_left; ++e) {
      cur.exps[var] = static_cast<std::uint8_t>(e);
      rec(var + 1, deg_left - e);
    }
    cur.exps[var] = 0;
  };
  rec(0, bound - 1);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<int> local_length_truncated(const std::vector<Poly>& generators,
                                          std::span<const felem> point, int cap) {
  if (cap < 2) throw std::invalid_argument("jet cap must be at least 2");
  if (generators.empty()) throw std::invalid_argument("no generators");
  const GF& F = generators[0].field();
  int n = generators[0].ring()->nvars();

  std::vector<Poly> shifted;
  for (const auto& g : generators) {
    Poly t = g.translated(point, cap);
    if (t.coeff(Monomial(n)) != 0) return 0;  // unit in the ideal
    shifted.push_back(std::move(t));
  }

  auto mons = jet_monomials(n, cap);
  std::map<Monomial, int> index;
  for (size_t i = 0; i < mons.size(); ++i) index[mons[i]] = static_cast<int>(i);

  int prev_dim = 1;  // modulo the maximal ideal only the constants remain
  for (int c = 2; c <= cap; ++c) {
    int cols = 0;
    for (const auto& m : mons)
      if (m.degree() < c) ++cols;
    std::vector<int> colmap(mons.size(), -1);
    int next = 0;
    for (size_t i = 0; i < mons.size(); ++i)
      if (mons[i].degree() < c) colmap[i] = next++;

    std::vector<std::vector<felem>> rows;
    for (const auto& g : shifted) {
      for (const auto& mult : mons) {
        if (mult.degree() > c - 2) continue;
        std::vector<felem> row(cols, 0);
        bool nonzero = false;
        for (const auto& [m, coef] : g.terms()) {
          Monomial prod = m * mult;
          if (prod.degree() >= c) continue;
          row[colmap[index.at(prod)]] = F.add(row[colmap[index.at(prod)]], coef);
          nonzero = true;
        }
        if (nonzero) rows.push_back(std::move(row));
      }
    }
    int dim = cols - rank_of(F, std::move(rows));
    if (dim == prev_dim) return dim;
    prev_dim = dim;
  }
  return std::nullopt;
}

CritRecord classify_critical_point(const Poly& f, std::span<const felem> point, int length_cap) {
  const GF& F = f.field();
  int n = f.ring()->nvars();
  CritRecord rec;
  rec.point.assign(point.begin(), point.end());

  std::vector<Poly> partials;
  for (int v = 0; v < n; ++v) partials.push_back(f.derivative(v));
  for (const auto& d : partials)
    if (d.eval(point) != 0) {
      rec.cls = CritClass::NotCritical;
      return rec;
    }

  HessianMatrix H = hessian_at(f, point);
  rec.hessian_rank = H.rank(F);
  if (rec.hessian_rank == n) {
    rec.cls = CritClass::Nondegenerate;
    rec.local_length = 1;
    return rec;
  }
  rec.local_length = local_length_truncated(partials, point, length_cap);
  if (F.p() == 2 && n % 2 == 1 && rec.local_length && *rec.local_length == 2)
    rec.cls = CritClass::AlmostNondegenerate;
  else
    rec.cls = CritClass::Degenerate;
  return rec;
}

namespace {

std::vector<felem> index_to_point(const GF& F, int dim, long long idx) {
  std::vector<felem> pt(dim);
  for (int v = dim - 1; v >= 0; --v) {
    pt[v] = static_cast<felem>(idx % F.size());
    idx /= F.size();
  }
  return pt;
}

void advance_point(const GF& F, std::vector<felem>& pt) {
  for (int v = static_cast<int>(pt.size()) - 1; v >= 0; --v) {
    if (++pt[v] < F.size()) return;
    pt[v] = 0;
  }
}

}  // namespace

std::vector<CritRecord> critical_points_census(const Poly& f, long long budget, int length_cap) {
  const GF& F = f.field();
  int n = f.ring()->nvars();
  long long total = point_count(F, n, budget);

  std::vector<Poly> partials;
  for (int v = 0; v < n; ++v) partials.push_back(f.derivative(v));
  std::vector<CompiledPoly> compiled;
  int max_exp = 1;
  for (const auto& d : partials) {
    compiled.emplace_back(d);
    max_exp = std::max(max_exp, compiled.back().max_exponent());
  }
  PowTable pw(F, max_exp);

  int threads = scan_thread_count();
  if (total < 4096) threads = 1;
  std::vector<std::vector<long long>> found(threads);
  auto scan = [&](int t) {
    long long lo = total * t / threads;
    long long hi = total * (t + 1) / threads;
    if (lo >= hi) return;
    std::vector<felem> pt = index_to_point(F, n, lo);
    for (long long i = lo; i < hi; ++i) {
      bool crit = true;
      for (const auto& d : compiled)
        if (d.eval(F, pw, pt) != 0) {
          crit = false;
          break;
        }
      if (crit) found[t].push_back(i);
      advance_point(F, pt);
    }
  };
  if (threads == 1) {
    scan(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(scan, t);
    for (auto& th : pool) th.join();
  }

  std::vector<CritRecord> records;
  for (int t = 0; t < threads; ++t)
    for (long long idx : found[t]) {
      auto pt = index_to_point(F, n, idx);
      records.push_back(classify_critical_point(f, pt, length_cap));
    }
  std::sort(records.begin(), records.end(),
            [](const CritRecord& a, const CritRecord& b) { return a.point < b.point; });
  return records;
}

bool unit_multiple_invariance_check(const Poly& f, const Poly& a, std::span<const felem> point) {
  const GF& F = f.field();
  if (a.eval(point) == 0) throw std::invalid_argument("unit factor vanishes at the point");
  Poly g = a.pow(F.p()) * f;
  CritRecord r1 = classify_critical_point(f, point);
  CritRecord r2 = classify_critical_point(g, point);
  return r1.cls == r2.cls;
}

namespace {

struct SlotDecomp {
  bool ok = true;
  std::string reason;
  Poly a, b, c, g;
  felem ycoeff = 0;
};

// Splits the stripped polynomial into the cusp slots; d is the pure
// power of y carried by the shape (3 in char 2, 2 in char 3).
SlotDecomp cusp_slots(const Poly& f, int x_var, int y_var, int d) {
  const GF& F = f.field();
  auto ring = f.ring();
  SlotDecomp out{true, "", Poly(ring, F), Poly(ring, F), Poly(ring, F), Poly(ring, F), 0};
  for (auto& [m, coef] : f.terms()) {
    int ex = m.exps[x_var], ey = m.exps[y_var];
    Monomial rest = m;
    rest.exps[x_var] = 0;
    rest.exps[y_var] = 0;
    if (ex == 1 && ey == 0) {
      out.a.add_term(rest, coef);
    } else if (ex == 2 && ey == 0) {
      out.b.add_term(rest, coef);
    } else if (ex == 1 && ey == 1) {
      out.c.add_term(rest, coef);
    } else if (ex == 0 && ey == d && rest.degree() == 0) {
      out.ycoeff = coef;
    } else if (ex + ey >= 3) {
      out.g.add_term(m, coef);
    } else {
      Poly t(ring, F);
      t.add_term(m, coef);
      out.ok = false;
      out.reason = "term outside shape: " + t.str();
      return out;
    }
  }
  return out;
}

SlotDecomp linear_slots(const Poly& f, int x_var, int y_var) {
  const GF& F = f.field();
  auto ring = f.ring();
  SlotDecomp out{true, "", Poly(ring, F), Poly(ring, F), Poly(ring, F), Poly(ring, F), 0};
  for (auto& [m, coef] : f.terms()) {
    int ex = m.exps[x_var], ey = m.exps[y_var];
    Monomial rest = m;
    rest.exps[x_var] = 0;
    rest.exps[y_var] = 0;
    if (ex == 1 && ey == 0) {
      out.a.add_term(rest, coef);
    } else if (ex == 0 && ey == 1) {
      out.b.add_term(rest, coef);
    } else if (ex + ey >= 2) {
      out.g.add_term(m, coef);
    } else {
      Poly t(ring, F);
      t.add_term(m, coef);
      out.ok = false;
      out.reason = "term outside shape: " + t.str();
      return out;
    }
  }
  return out;
}

std::vector<int> u_vars_of(const Poly& f, int x_var, int y_var) {
  std::vector<int> u;
  for (int v = 0; v < f.ring()->nvars(); ++v)
    if (v != x_var && v != y_var) u.push_back(v);
  return u;
}

// Rational points of the vanishing set of polys (restricted to the u
// coordinates) where the Jacobian drops below expected_rank.
// Returns a failing witness or nullopt.  Coordinates not in u_vars are
// fixed to zero.
std::optional<std::vector<felem>> jacobian_defect_witness(const std::vector<Poly>& polys,
                                                          const std::vector<int>& u_vars,
                                                          const GF& F, int expected_rank,
                                                          long long budget) {
  if (polys.empty()) return std::nullopt;
  int nv = polys[0].ring()->nvars();
  int dim = static_cast<int>(u_vars.size());
  std::vector<Poly> mapped;
  for (const auto& f : polys) mapped.push_back(&f.field() == &F ? f : f.mapped_into(F));
  std::vector<std::vector<Poly>> jac;
  for (const auto& f : mapped) {
    std::vector<Poly> row;
    for (int v : u_vars) row.push_back(f.derivative(v));
    jac.push_back(std::move(row));
  }
  std::optional<std::vector<felem>> witness;
  try {
    enumerate_points(F, dim, budget, [&](std::span<const felem> upt) {
      if (witness) return;
      std::vector<felem> full(nv, 0);
      for (int t = 0; t < dim; ++t) full[u_vars[t]] = upt[t];
      for (const auto& f : mapped)
        if (f.eval(full) != 0) return;
      std::vector<std::vector<felem>> rows;
      for (auto& row : jac) {
        std::vector<felem> r;
        for (auto& d : row) r.push_back(d.eval(full));
        rows.push_back(std::move(r));
      }
      if (rank_of(F, std::move(rows)) < expected_rank)
        witness = std::vector<felem>(upt.begin(), upt.end());
    });
  } catch (const budget_exceeded&) {
    return std::nullopt;  // treated as vacuous on this field; caller flags partial
  }
  return witness;
}

std::string fmt_point(const GF& F, std::span<const felem> pt) {
  std::string s = "(";
  for (size_t i = 0; i < pt.size(); ++i) {
    if (i) s += ",";
    s += F.format(pt[i]);
  }
  return s + ")";
}

// Census check shared by both conditions: on the scan field, every
// rational point of Xi must be critical and every rational critical
// point must lie on Xi or be (almost) nondegenerate.
ConditionCheck critical_locus_check(const Poly& f_orig, const std::vector<Poly>& locus_eqs,
                                    int x_var, int y_var, const GF& scanF, long long budget,
                                    const std::string& label) {
  ConditionCheck chk;
  chk.name = label;
  chk.partial = true;
  chk.genericity_sensitive = true;
  const GF& F0 = f_orig.field();
  Poly f = (&F0 == &scanF) ? f_orig : f_orig.mapped_into(scanF);
  std::vector<Poly> eqs;
  for (const auto& e : locus_eqs) eqs.push_back(&e.field() == &scanF ? e : e.mapped_into(scanF));
  int nv = f.ring()->nvars();
  auto on_locus = [&](std::span<const felem> pt) {
    if (pt[x_var] != 0 || pt[y_var] != 0) return false;
    for (const auto& e : eqs)
      if (e.eval(pt) != 0) return false;
    return true;
  };

  std::vector<CritRecord> recs;
  try {
    recs = critical_points_census(f, budget);
  } catch (const budget_exceeded&) {
    chk.pass = true;
    chk.evidence = "scan skipped on " + scanF.name() + " (budget)";
    return chk;
  }
  for (const auto& r : recs) {
    if (on_locus(r.point)) continue;
    if (r.cls == CritClass::Nondegenerate || r.cls == CritClass::AlmostNondegenerate) continue;
    chk.pass = false;
    chk.evidence = "degenerate critical point off the locus at " + fmt_point(scanF, r.point) +
                   " over " + scanF.name();
    return chk;
  }
  // every rational locus point must be critical
  std::vector<Poly> partials;
  for (int v = 0; v < nv; ++v) partials.push_back(f.derivative(v));
  auto u_vars = u_vars_of(f, x_var, y_var);
  std::optional<std::string> bad;
  try {
    enumerate_points(scanF, static_cast<int>(u_vars.size()), budget,
                     [&](std::span<const felem> upt) {
                       if (bad) return;
                       std::vector<felem> full(nv, 0);
                       for (size_t t = 0; t < u_vars.size(); ++t) full[u_vars[t]] = upt[t];
                       if (!on_locus(full)) return;
                       for (const auto& d : partials)
                         if (d.eval(full) != 0) {
                           bad = fmt_point(scanF, full);
                           return;
                         }
                     });
  } catch (const budget_exceeded&) {
    // already covered by the census above
  }
  if (bad) {
    chk.pass = false;
    chk.evidence = "locus point not critical at " + *bad + " over " + scanF.name();
    return chk;
  }
  chk.pass = true;
  chk.evidence = "checked " + std::to_string(recs.size()) + " critical points over " + scanF.name();
  return chk;
}

const GF& extension_of(const GF& F) { return GF::get(F.p(), 2 * F.k()); }

}  // namespace

std::string ConditionReport::to_json() const {
  nlohmann::json j;
  j["condition"] = kind == ConditionKind::TransverseCusp ? "transverse-cusp" : "transverse-linear";
  j["pass"] = pass;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["partial"] = c.partial;
    cj["evidence"] = c.evidence;
    arr.push_back(cj);
  }
  j["checks"] = arr;
  j["witnesses"] = witnesses;
  return j.dump();
}

ConditionReport check_condition_cusp(const Poly& f_in, int x_var, int y_var, long long budget) {
  const GF& F = f_in.field();
  int p = F.p();
  if (p != 2 && p != 3) throw std::invalid_argument("condition requires characteristic 2 or 3");
  int d = p == 2 ? 3 : 2;
  ConditionReport rep;
  rep.kind = ConditionKind::TransverseCusp;

  Poly f = f_in.stripped_pth_powers();
  SlotDecomp slots = cusp_slots(f, x_var, y_var, d);

  ConditionCheck shape;
  shape.name = "shape";
  if (!slots.ok) {
    shape.pass = false;
    shape.evidence = slots.reason;
    rep.checks.push_back(shape);
    rep.pass = false;
    return rep;
  }
  if (slots.ycoeff == 0) {
    shape.pass = false;
    shape.evidence = "missing pure y^" + std::to_string(d) + " term";
    rep.checks.push_back(shape);
    rep.pass = false;
    return rep;
  }
  // rescale so the y^d coefficient is 1; a constant is always a p-th
  // power here, so the critical structure is unchanged
  felem s = F.inv(slots.ycoeff);
  slots.a = slots.a.scaled(s);
  slots.b = slots.b.scaled(s);
  slots.c = slots.c.scaled(s);
  slots.g = slots.g.scaled(s);
  Poly fnorm = f.scaled(s);
  shape.pass = true;
  shape.evidence = "decomposed with y^" + std::to_string(d) + " coefficient " + F.format(slots.ycoeff);
  rep.checks.push_back(shape);

  rep.witnesses["a"] = slots.a.str();
  rep.witnesses["b"] = slots.b.str();
  rep.witnesses["c"] = slots.c.str();
  rep.witnesses["g"] = slots.g.str();

  ConditionCheck dega;
  dega.name = "deg-a-positive";
  dega.genericity_sensitive = true;
  dega.pass = !slots.a.is_zero() && slots.a.total_degree() > 0;
  dega.evidence = "a = " + slots.a.str();
  rep.checks.push_back(dega);

  auto u_vars = u_vars_of(f, x_var, y_var);
  ConditionCheck smooth;
  smooth.name = "a-hypersurface-nonsingular";
  smooth.partial = true;
  smooth.genericity_sensitive = true;
  smooth.pass = true;
  if (dega.pass) {
    for (const GF* SF : {&F, &extension_of(F)}) {
      auto w = jacobian_defect_witness({slots.a}, u_vars, *SF, 1, budget);
      if (w) {
        smooth.pass = false;
        smooth.evidence = "singular point of (a=0) at " + fmt_point(*SF, *w) + " over " + SF->name();
        break;
      }
    }
    if (smooth.pass) smooth.evidence = "no singular rational point over base field and one extension";
  } else {
    smooth.pass = false;
    smooth.evidence = "skipped: a is constant";
  }
  rep.checks.push_back(smooth);

  ConditionCheck gmem;
  gmem.name = "g-in-cube-of-xy";
  gmem.pass = true;
  gmem.evidence = "all residual terms have combined x,y degree >= 3";
  rep.checks.push_back(gmem);

  if (p == 2) {
    ConditionCheck ymon;
    ymon.name = "ycube-monomials";
    ymon.pass = true;
    for (auto& [m, coef] : slots.g.terms()) {
      int ex = m.exps[x_var], ey = m.exps[y_var];
      if (ey >= 3 && !(ex >= 1 || ey >= 4)) {
        ymon.pass = false;
        Poly t(f.ring(), F);
        t.add_term(m, coef);
        ymon.evidence = "bad monomial " + t.str();
        break;
      }
    }
    if (ymon.pass) ymon.evidence = "every y^3-divisible monomial of g is divisible by y^3 x or y^4";
    rep.checks.push_back(ymon);
  }

  if (dega.pass) {
    for (const GF* SF : {&F, &extension_of(F)}) {
      rep.checks.push_back(critical_locus_check(fnorm, {slots.a}, x_var, y_var, *SF, budget,
                                                "critical-locus-census"));
    }
  }

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

ConditionReport check_condition_linear(const Poly& f_in, int x_var, int y_var, long long budget) {
  const GF& F = f_in.field();
  int p = F.p();
  if (p != 2 && p != 3) throw std::invalid_argument("condition requires characteristic 2 or 3");
  ConditionReport rep;
  rep.kind = ConditionKind::TransverseLinear;

  Poly f = f_in.stripped_pth_powers();
  SlotDecomp slots = linear_slots(f, x_var, y_var);

  ConditionCheck shape;
  shape.name = "shape";
  if (!slots.ok) {
    shape.pass = false;
    shape.evidence = slots.reason;
    rep.checks.push_back(shape);
    rep.pass = false;
    return rep;
  }
  shape.pass = true;
  shape.evidence = "decomposed as a*x + b*y + g";
  rep.checks.push_back(shape);

  rep.witnesses["a"] = slots.a.str();
  rep.witnesses["b"] = slots.b.str();
  rep.witnesses["g"] = slots.g.str();

  ConditionCheck dega;
  dega.name = "deg-a-positive";
  dega.genericity_sensitive = true;
  dega.pass = !slots.a.is_zero() && slots.a.total_degree() > 0;
  dega.evidence = "a = " + slots.a.str();
  rep.checks.push_back(dega);

  ConditionCheck degb;
  degb.name = "deg-b-positive";
  degb.genericity_sensitive = true;
  degb.pass = !slots.b.is_zero() && slots.b.total_degree() > 0;
  degb.evidence = "b = " + slots.b.str();
  rep.checks.push_back(degb);

  auto u_vars = u_vars_of(f, x_var, y_var);
  ConditionCheck ci;
  ci.name = "ab-complete-intersection-nonsingular";
  ci.partial = true;
  ci.genericity_sensitive = true;
  ci.pass = true;
  if (dega.pass && degb.pass) {
    for (const GF* SF : {&F, &extension_of(F)}) {
      auto w = jacobian_defect_witness({slots.a, slots.b}, u_vars, *SF, 2, budget);
      if (w) {
        ci.pass = false;
        ci.evidence =
            "Jacobian rank below 2 on (a=b=0) at " + fmt_point(*SF, *w) + " over " + SF->name();
        break;
      }
    }
    if (ci.pass) ci.evidence = "rank 2 at every rational point over base field and one extension";
  } else {
    ci.pass = false;
    ci.evidence = "skipped: a or b degenerate";
  }
  rep.checks.push_back(ci);

  ConditionCheck gmem;
  gmem.name = "g-in-square-of-xy";
  gmem.pass = true;
  gmem.evidence = "all residual terms have combined x,y degree >= 2";
  rep.checks.push_back(gmem);

  if (dega.pass && degb.pass) {
    for (const GF* SF : {&F, &extension_of(F)}) {
      rep.checks.push_back(critical_locus_check(f, {slots.a, slots.b}, x_var, y_var, *SF, budget,
                                                "critical-locus-census"));
    }
  }

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace dpfib
