#include "dpfib/bundle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "json.hpp"

namespace dpfib {

namespace {

std::vector<std::string> default_names(int base_dim, int fibers) {
  std::vector<std::string> names;
  for (int i = 0; i <= base_dim; ++i) names.push_back("u" + std::to_string(i));
  static const char* short_names[] = {"x", "y", "z", "w"};
  for (int j = 0; j < fibers; ++j) {
    if (fibers <= 4)
      names.push_back(short_names[j]);
    else
      names.push_back("x" + std::to_string(j));
  }
  return names;
}

}  // namespace

BundleSpec::BundleSpec(int base_dim, std::vector<long> twists, std::vector<long> weights)
    : base_dim_(base_dim), twists_(std::move(twists)), weights_(std::move(weights)) {
  if (base_dim_ < 1) throw std::invalid_argument("base dimension must be >= 1");
  if (twists_.size() != weights_.size() || twists_.empty())
    throw std::invalid_argument("twists and weights must have equal positive length");
  for (long a : weights_)
    if (a < 1) throw std::invalid_argument("fiber weights must be positive");
  cox_ring_ = Ring::make(default_names(base_dim_, fiber_count()));
}

Bidegree BundleSpec::bidegree_of(const Monomial& m) const {
  Bidegree bd;
  for (int i = 0; i <= base_dim_; ++i) bd.alpha += m.exps[u_var(i)];
  for (int j = 0; j < fiber_count(); ++j) {
    bd.alpha += twists_[j] * m.exps[x_var(j)];
    bd.beta += weights_[j] * m.exps[x_var(j)];
  }
  return bd;
}

std::optional<Bidegree> BundleSpec::homogeneous_bidegree(const Poly& f) const {
  std::optional<Bidegree> bd;
  for (auto& [m, c] : f.terms()) {
    Bidegree d = bidegree_of(m);
    if (!bd)
      bd = d;
    else if (*bd != d)
      throw std::invalid_argument("polynomial is not homogeneous");
  }
  return bd;
}

void BundleSpec::require_valid_chart(const Chart& c) const {
  if (c.i < 0 || c.i > base_dim_ || c.j < 0 || c.j >= fiber_count())
    throw std::invalid_argument("chart index out of range");
  if (weights_[c.j] != 1)
    throw std::invalid_argument("chart requires a weight-1 fiber variable");
}

RingPtr BundleSpec::chart_ring(const Chart& c) const {
  require_valid_chart(c);
  std::vector<std::string> names;
  for (int v = 0; v < nvars(); ++v)
    if (v != u_var(c.i) && v != x_var(c.j)) names.push_back(cox_ring_->name(v));
  return Ring::make(std::move(names));
}

std::string BundleSpec::to_json() const {
  nlohmann::json j;
  j["base_dim"] = base_dim_;
  j["twists"] = twists_;
  j["weights"] = weights_;
  return j.dump();
}

BundleSpec BundleSpec::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  return BundleSpec(j.at("base_dim").get<int>(), j.at("twists").get<std::vector<long>>(),
                    j.at("weights").get<std::vector<long>>());
}

namespace {

// Fiber exponent vectors with given weighted degree beta.
void fiber_exponents(const BundleSpec& spec, long beta, int j, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out) {
  if (j == spec.fiber_count()) {
    if (beta == 0) out.push_back(cur);
    return;
  }
  long a = spec.weight(j);
  for (long e = 0; e * a <= beta; ++e) {
    cur[j] = static_cast<int>(e);
    fiber_exponents(spec, beta - e * a, j + 1, cur, out);
  }
  cur[j] = 0;
}

// Compositions of d into `parts` nonnegative summands.
void compositions(long d, int parts, std::vector<int>& cur, int idx,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (idx == parts - 1) {
    cur[idx] = static_cast<int>(d);
    emit(cur);
    return;
  }
  for (long e = 0; e <= d; ++e) {
    cur[idx] = static_cast<int>(e);
    compositions(d - e, parts, cur, idx + 1, emit);
  }
}

}  // namespace

std::vector<Monomial> monomial_basis(const BundleSpec& spec, Bidegree bd) {
  std::vector<Monomial> out;
  if (bd.beta < 0) return out;
  std::vector<std::vector<int>> fibers;
  std::vector<int> cur(spec.fiber_count(), 0);
  fiber_exponents(spec, bd.beta, 0, cur, fibers);
  for (const auto& fe : fibers) {
    long rem = bd.alpha;
    for (int j = 0; j < spec.fiber_count(); ++j) rem -= spec.twist(j) * fe[j];
    if (rem < 0) continue;
    std::vector<int> ue(spec.base_dim() + 1, 0);
    compositions(rem, spec.base_dim() + 1, ue, 0, [&](const std::vector<int>& u) {
      Monomial m(spec.nvars());
      for (int i = 0; i <= spec.base_dim(); ++i) {
        if (u[i] > 255) throw std::overflow_error("exponent exceeds monomial storage");
        m.exps[spec.u_var(i)] = static_cast<std::uint8_t>(u[i]);
      }
      for (int j = 0; j < spec.fiber_count(); ++j) {
        if (fe[j] > 255) throw std::overflow_error("exponent exceeds monomial storage");
        m.exps[spec.x_var(j)] = static_cast<std::uint8_t>(fe[j]);
      }
      out.push_back(std::move(m));
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Monomial> h0_witness(const BundleSpec& spec, Bidegree bd) {
  if (bd.beta < 0) return std::nullopt;
  std::vector<std::vector<int>> fibers;
  std::vector<int> cur(spec.fiber_count(), 0);
  fiber_exponents(spec, bd.beta, 0, cur, fibers);
  std::optional<Monomial> best;
  for (const auto& fe : fibers) {
    long rem = bd.alpha;
    for (int j = 0; j < spec.fiber_count(); ++j) rem -= spec.twist(j) * fe[j];
    if (rem < 0 || rem > 255) continue;
    Monomial m(spec.nvars());
    m.exps[spec.u_var(spec.base_dim())] = static_cast<std::uint8_t>(rem);
    for (int j = 0; j < spec.fiber_count(); ++j)
      m.exps[spec.x_var(j)] = static_cast<std::uint8_t>(fe[j]);
    if (!best || m < *best) best = m;
  }
  return best;
}

Poly random_poly(const BundleSpec& spec, const GF& F, Bidegree bd, Rng& rng) {
  Poly f(spec.cox_ring(), F);
  for (const auto& m : monomial_basis(spec, bd)) f.add_term(m, rng.uniform(F));
  return f;
}

Poly dehomogenize(const BundleSpec& spec, const Poly& f, const Chart& c) {
  spec.require_valid_chart(c);
  Poly g = f.at(spec.u_var(c.i), f.field().one()).at(spec.x_var(c.j), f.field().one());
  return g.without_vars({spec.u_var(c.i), spec.x_var(c.j)}, spec.chart_ring(c));
}

bool is_valid_point(const BundleSpec& spec, const Point& p) {
  if (static_cast<int>(p.size()) != spec.nvars()) return false;
  bool u_nonzero = false, x_nonzero = false;
  for (int i = 0; i <= spec.base_dim(); ++i) u_nonzero |= (p[spec.u_var(i)] != 0);
  for (int j = 0; j < spec.fiber_count(); ++j) x_nonzero |= (p[spec.x_var(j)] != 0);
  return u_nonzero && x_nonzero;
}

std::optional<Point> canonical_lift(const BundleSpec& spec, const GF& F, const Point& p) {
  if (!is_valid_point(spec, p)) return std::nullopt;
  Point q = p;
  int i0 = -1;
  for (int i = 0; i <= spec.base_dim(); ++i)
    if (q[spec.u_var(i)] != 0) {
      i0 = i;
      break;
    }
  felem s = F.inv(q[spec.u_var(i0)]);
  for (int i = 0; i <= spec.base_dim(); ++i) q[spec.u_var(i)] = F.mul(q[spec.u_var(i)], s);
  for (int j = 0; j < spec.fiber_count(); ++j)
    q[spec.x_var(j)] = F.mul(q[spec.x_var(j)], F.pow(s, spec.twist(j)));
  int j0 = -1;
  for (int j = 0; j < spec.fiber_count(); ++j)
    if (spec.weight(j) == 1 && q[spec.x_var(j)] != 0) {
      j0 = j;
      break;
    }
  if (j0 < 0) return std::nullopt;
  felem t = F.inv(q[spec.x_var(j0)]);
  for (int j = 0; j < spec.fiber_count(); ++j)
    q[spec.x_var(j)] = F.mul(q[spec.x_var(j)], F.pow(t, spec.weight(j)));
  return q;
}

std::optional<std::vector<felem>> chart_coords(const BundleSpec& spec, const GF& F,
                                               const Point& p, const Chart& c) {
  spec.require_valid_chart(c);
  if (p[spec.u_var(c.i)] == 0 || p[spec.x_var(c.j)] == 0) return std::nullopt;
  Point q = p;
  felem s = F.inv(q[spec.u_var(c.i)]);
  for (int i = 0; i <= spec.base_dim(); ++i) q[spec.u_var(i)] = F.mul(q[spec.u_var(i)], s);
  for (int j = 0; j < spec.fiber_count(); ++j)
    q[spec.x_var(j)] = F.mul(q[spec.x_var(j)], F.pow(s, spec.twist(j)));
  felem t = F.inv(q[spec.x_var(c.j)]);
  for (int j = 0; j < spec.fiber_count(); ++j)
    q[spec.x_var(j)] = F.mul(q[spec.x_var(j)], F.pow(t, spec.weight(j)));
  std::vector<felem> out;
  for (int v = 0; v < spec.nvars(); ++v)
    if (v != spec.u_var(c.i) && v != spec.x_var(c.j)) out.push_back(q[v]);
  return out;
}

Point lift_from_chart(const BundleSpec& spec, const Chart& c, std::span<const felem> coords) {
  spec.require_valid_chart(c);
  Point p(spec.nvars());
  size_t k = 0;
  for (int v = 0; v < spec.nvars(); ++v) {
    if (v == spec.u_var(c.i) || v == spec.x_var(c.j))
      p[v] = 1;
    else
      p[v] = coords[k++];
  }
  return p;
}

Poly CoordChange::apply(const Poly& f) const {
  Poly g = f;
  for (const auto& op : ops) {
    int lv = spec->x_var(op.l);
    Poly repl = Poly::variable(g.ring(), *F, lv).scaled(op.scale);
    if (op.beta_l != 0) {
      Poly sub = Poly::constant(g.ring(), *F, F->neg(op.beta_l));
      sub = sub * Poly::variable(g.ring(), *F, spec->u_var(0)).pow(static_cast<int>(op.u0_exp));
      sub = sub * Poly::variable(g.ring(), *F, spec->x_var(op.j)).pow(static_cast<int>(op.xj_exp));
      repl = repl + sub;
    }
    g = g.substituted(lv, repl);
  }
  return g;
}

Point CoordChange::apply(const Point& p) const {
  Point q = p;
  for (const auto& op : ops) {
    felem v = F->mul(op.scale, p[spec->x_var(op.l)]);
    felem sub = F->mul(op.beta_l, F->mul(F->pow(p[spec->u_var(0)], op.u0_exp),
                                         F->pow(p[spec->x_var(op.j)], op.xj_exp)));
    q[spec->x_var(op.l)] = F->sub(v, sub);
  }
  return q;
}

CoordChange move_point_to_standard(const BundleSpec& spec, const GF& F, const Point& p, int j) {
  if (p[spec.u_var(0)] == 0)
    throw std::invalid_argument("point must have nonzero u0-coordinate");
  if (j < 0) {
    for (int cand = 0; cand < spec.fiber_count(); ++cand)
      if (spec.weight(cand) == 1 && p[spec.x_var(cand)] != 0) {
        j = cand;
        break;
      }
  }
  if (j < 0 || spec.weight(j) != 1 || p[spec.x_var(j)] == 0)
    throw std::invalid_argument("point needs a nonzero weight-1 fiber coordinate");
  CoordChange cc;
  cc.spec = &spec;
  cc.F = &F;
  felem alpha0 = p[spec.u_var(0)];
  felem betaj = p[spec.x_var(j)];
  for (int l = 0; l < spec.fiber_count(); ++l) {
    if (l == j) continue;
    long a = spec.weight(l);
    // twist(l)/a >= twist(j)  <=>  twist(l) >= a * twist(j)
    if (spec.twist(l) < a * spec.twist(j)) continue;
    CoordChange::Op op;
    op.l = l;
    op.j = j;
    op.u0_exp = spec.twist(l) - a * spec.twist(j);
    op.xj_exp = a;
    op.scale = F.mul(F.pow(alpha0, op.u0_exp), F.pow(betaj, a));
    op.beta_l = p[spec.x_var(l)];
    cc.ops.push_back(op);
  }
  return cc;
}

Bidegree canonical_bidegree(const BundleSpec& spec) {
  Bidegree bd;
  bd.alpha = -(spec.base_dim() + 1);
  for (int j = 0; j < spec.fiber_count(); ++j) {
    bd.alpha -= spec.twist(j);
    bd.beta -= spec.weight(j);
  }
  return bd;
}

Bidegree adjunction_bidegree(const BundleSpec& ambient, Bidegree hyp) {
  return canonical_bidegree(ambient) + hyp;
}

std::pair<DivisorClass, DivisorClass> nef_generators(const BundleSpec& spec) {
  int best = 0;
  for (int j = 1; j < spec.fiber_count(); ++j) {
    // compare twist(j)/weight(j) with twist(best)/weight(best)
    long lhs = spec.twist(j) * spec.weight(best);
    long rhs = spec.twist(best) * spec.weight(j);
    if (lhs > rhs || (lhs == rhs && spec.weight(j) < spec.weight(best))) best = j;
  }
  return {DivisorClass{1, 0}, DivisorClass{spec.twist(best), spec.weight(best)}};
}

}  // namespace dpfib
