#include "dpfib/restriction.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "dpfib/linalg.hpp"
#include "json.hpp"

namespace dpfib {

JetSpace jet_space(const BundleSpec& spec, const Chart& chart, int order) {
  spec.require_valid_chart(chart);
  int dim = spec.nvars() - 2;
  JetSpace js;
  js.chart = chart;
  js.order = order;
  Monomial cur(dim);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == dim) {
      js.basis.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur.exps[var] = static_cast<std::uint8_t>(e);
      rec(var + 1, left - e);
    }
    cur.exps[var] = 0;
  };
  rec(0, order - 1);
  std::sort(js.basis.begin(), js.basis.end());
  return js;
}

int RestrictionMatrix::rank(const GF& F) const { return rank_of(F, rows); }

RestrictionMatrix restriction_matrix(const BundleSpec& spec, const GF& F, Bidegree bd,
                                     const Point& point, int k) {
  if (!is_valid_point(spec, point)) throw std::invalid_argument("not a point of the bundle");
  int i = -1, j = -1;
  for (int t = 0; t <= spec.base_dim(); ++t)
    if (point[spec.u_var(t)] != 0) {
      i = t;
      break;
    }
  for (int t = 0; t < spec.fiber_count(); ++t)
    if (spec.weight(t) == 1 && point[spec.x_var(t)] != 0) {
      j = t;
      break;
    }
  if (j < 0)
    throw std::invalid_argument("point lies in the singular locus (no weight-1 chart)");
  Chart chart{i, j};
  auto coords = chart_coords(spec, F, point, chart);

  RestrictionMatrix M;
  M.chart = chart;
  M.order = k;
  JetSpace js = jet_space(spec, chart, k);
  M.jet_dim = js.dim();
  std::map<Monomial, int> col;
  for (int c = 0; c < js.dim(); ++c) col[js.basis[c]] = c;

  for (const auto& mon : monomial_basis(spec, bd)) {
    Poly g(spec.cox_ring(), F);
    g.add_term(mon, F.one());
    Poly affine = dehomogenize(spec, g, chart);
    Poly local = affine.translated(*coords, k);
    std::vector<felem> row(js.dim(), 0);
    for (auto& [m, c] : local.terms()) row[col.at(m)] = c;
    M.rows.push_back(std::move(row));
  }
  return M;
}

BundleSpec surjectivity_bundle(int base_dim, int m, long lambda, long mu) {
  return BundleSpec(base_dim, {0, lambda, mu}, {1, 1, m});
}

namespace {

std::string stratum_name(Stratum s) {
  switch (s) {
    case Stratum::UX: return "U_x";
    case Stratum::PiY: return "Pi_y";
    case Stratum::GammaZ: return "Gamma_z";
  }
  return "?";
}

Point sample_point(const BundleSpec& spec, const GF& F, Stratum s, Rng& rng) {
  Point p(spec.nvars(), 0);
  bool any = false;
  for (int i = 0; i <= spec.base_dim(); ++i) {
    p[spec.u_var(i)] = rng.uniform(F);
    any |= (p[spec.u_var(i)] != 0);
  }
  if (!any) p[spec.u_var(0)] = 1;
  switch (s) {
    case Stratum::UX:
      p[spec.x_var(0)] = 1;
      p[spec.x_var(1)] = rng.uniform(F);
      p[spec.x_var(2)] = rng.uniform(F);
      break;
    case Stratum::PiY:
      p[spec.x_var(1)] = 1;
      p[spec.x_var(2)] = rng.uniform(F);
      break;
    case Stratum::GammaZ:
      p[spec.x_var(2)] = 1;
      break;
  }
  return p;
}

Point standard_point(const BundleSpec& spec, Stratum s) {
  Point p(spec.nvars(), 0);
  p[spec.u_var(0)] = 1;
  switch (s) {
    case Stratum::UX: p[spec.x_var(0)] = 1; break;
    case Stratum::PiY: p[spec.x_var(1)] = 1; break;
    case Stratum::GammaZ: p[spec.x_var(2)] = 1; break;
  }
  return p;
}

}  // namespace

std::string SurjReport::to_json() const {
  nlohmann::json j;
  j["case"] = case_id;
  j["order"] = order;
  j["stratum"] = stratum_name(stratum);
  j["hypothesis_ok"] = hypothesis_ok;
  j["hypothesis"] = hypothesis_note;
  j["all_surjective"] = all_surjective;
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& r : points) {
    nlohmann::json pj;
    pj["point"] = r.point;
    pj["rank"] = r.rank;
    pj["jet_dim"] = r.jet_dim;
    pj["surjective"] = r.surjective;
    pts.push_back(pj);
  }
  j["points"] = pts;
  return j.dump();
}

SurjReport verify_surjrest_case(int case_id, int m, int d, long lambda, long mu, long delta,
                                int base_dim, const GF& F, int sample_size, std::uint64_t seed) {
  if (case_id < 1 || case_id > 4) throw std::invalid_argument("case must be 1..4");
  BundleSpec Q = surjectivity_bundle(base_dim, m, lambda, mu);
  SurjReport rep;
  rep.case_id = case_id;

  long need = 0;
  switch (case_id) {
    case 1:
      rep.order = 3;
      rep.stratum = Stratum::UX;
      need = std::max<long>({2, 2 * lambda, 2 * mu});
      rep.hypothesis_ok = d >= 3 * m && delta >= need;
      rep.hypothesis_note = "d >= 3m and delta >= max(2,2lambda,2mu) = " + std::to_string(need);
      break;
    case 2:
      rep.order = 4;
      rep.stratum = Stratum::UX;
      need = std::max<long>({3, 3 * lambda, 3 * mu});
      rep.hypothesis_ok = d >= 3 * m && delta >= need;
      rep.hypothesis_note = "d >= 3m and delta >= max(3,3lambda,3mu) = " + std::to_string(need);
      break;
    case 3:
      rep.order = 2;
      rep.stratum = Stratum::PiY;
      need = std::max<long>(d * lambda + 1, (d - m) * lambda + mu);
      rep.hypothesis_ok = d >= 3 * m && mu >= m * lambda && delta >= need;
      rep.hypothesis_note =
          "d >= 3m, mu >= m*lambda, delta >= max(d*lambda+1,(d-m)*lambda+mu) = " +
          std::to_string(need);
      break;
    case 4:
      rep.order = 2;
      rep.stratum = Stratum::GammaZ;
      need = d * mu + 1;
      rep.hypothesis_ok = d >= 3 * m && m == 1 && lambda <= mu && delta >= need;
      rep.hypothesis_note = "d >= 3m, m = 1, lambda <= mu, delta >= d*mu+1 = " + std::to_string(need);
      break;
  }
  if (rep.stratum == Stratum::GammaZ && m != 1)
    throw std::invalid_argument("Gamma_z points lie off weight-1 charts when m > 1");

  Bidegree bd{delta, d};
  Rng rng(seed);
  std::vector<Point> pts;
  pts.push_back(standard_point(Q, rep.stratum));
  for (int t = 0; t < sample_size; ++t) pts.push_back(sample_point(Q, F, rep.stratum, rng));

  rep.all_surjective = true;
  for (const auto& p : pts) {
    RestrictionMatrix M = restriction_matrix(Q, F, bd, p, rep.order);
    SurjPointResult r;
    r.point = p;
    r.jet_dim = M.jet_dim;
    r.rank = M.rank(F);
    r.surjective = (r.rank == r.jet_dim);
    if (r.surjective && rep.order > 1) {
      // surjectivity at order k forces it at order k-1 (the jet spaces
      // are nested quotients); verified on every run
      RestrictionMatrix Mlow = restriction_matrix(Q, F, bd, p, rep.order - 1);
      if (Mlow.rank(F) != Mlow.jet_dim)
        throw std::logic_error("restriction surjectivity not downward closed");
    }
    rep.all_surjective = rep.all_surjective && r.surjective;
    rep.points.push_back(std::move(r));
  }
  return rep;
}

}  // namespace dpfib
