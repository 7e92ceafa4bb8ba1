#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dpfib/bundle.hpp"
#include "dpfib/classifier.hpp"
#include "dpfib/critical.hpp"
#include "dpfib/pipeline.hpp"
#include "dpfib/restriction.hpp"
#include "dpfib/selftest.hpp"
#include "json.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitBudget = 65;
constexpr int kExitInternal = 66;
constexpr int kExitFailed = 2;
constexpr int kExitNotApplicable = 3;

std::vector<long> parse_csv(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  return out;
}

dpfib::FamilyParams family_from(int degree, int n, const std::vector<long>& v) {
  switch (degree) {
    case 1:
      if (v.size() != 2) throw CLI::ValidationError("--params", "degree 1 takes lambda,mu");
      return dpfib::FamilyParams::dp1(n, v[0], v[1]);
    case 2:
      if (v.size() != 3) throw CLI::ValidationError("--params", "degree 2 takes lambda,mu,nu");
      return dpfib::FamilyParams::dp2(n, v[0], v[1], v[2]);
    case 3:
      if (v.size() != 4) throw CLI::ValidationError("--params", "degree 3 takes theta,lambda,mu,nu");
      return dpfib::FamilyParams::dp3(n, v[0], v[1], v[2], v[3]);
    default:
      throw CLI::ValidationError("--degree", "must be 1, 2 or 3");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dpfib;
  CLI::App app{"del Pezzo fibration verification toolkit"};
  app.require_subcommand(1);
  bool json_out = false;
  app.add_flag("--json", json_out, "machine-readable output");

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "verdict for one family");
  int cl_degree = 3, cl_n = 3;
  std::string cl_params;
  classify_cmd->add_option("--degree", cl_degree, "del Pezzo degree")->required();
  classify_cmd->add_option("--n", cl_n, "total dimension")->required();
  classify_cmd->add_option("--params", cl_params, "twist parameters, comma separated")->required();

  // enumerate
  auto* enum_cmd = app.add_subcommand("enumerate", "classify families within bounds");
  int en_degree = 3, en_n = 3;
  long en_max = 3, en_max_twist = -1, en_max_theta = -1;
  enum_cmd->add_option("--degree", en_degree)->required();
  enum_cmd->add_option("--n", en_n)->required();
  enum_cmd->add_option("--max", en_max, "bound for twists and theta");
  enum_cmd->add_option("--max-twist", en_max_twist);
  enum_cmd->add_option("--max-theta", en_max_theta);

  // basis
  auto* basis_cmd = app.add_subcommand("basis", "monomial basis of a graded piece");
  std::string ba_spec, ba_bd;
  basis_cmd->add_option("--spec", ba_spec, "bundle spec JSON file")->required();
  basis_cmd->add_option("--bidegree", ba_bd, "alpha,beta")->required();

  // crit
  auto* crit_cmd = app.add_subcommand("crit", "critical-point census of an affine polynomial");
  std::string cr_field = "GF(2)", cr_vars = "x,y,z", cr_poly;
  long long cr_budget = kDefaultScanBudget;
  crit_cmd->add_option("--field", cr_field);
  crit_cmd->add_option("--vars", cr_vars, "comma-separated variable names");
  crit_cmd->add_option("--poly", cr_poly)->required();
  crit_cmd->add_option("--budget", cr_budget);

  // restrict
  auto* rest_cmd = app.add_subcommand("restrict", "surjectivity of restriction maps");
  int re_case = 1, re_m = 1, re_d = 3, re_base = 1, re_samples = 100;
  long re_lambda = 0, re_mu = 0, re_delta = 2;
  std::string re_field = "GF(2^4)";
  std::uint64_t re_seed = 1;
  rest_cmd->add_option("--case", re_case)->required();
  rest_cmd->add_option("--m", re_m);
  rest_cmd->add_option("--d", re_d);
  rest_cmd->add_option("--lambda", re_lambda);
  rest_cmd->add_option("--mu", re_mu);
  rest_cmd->add_option("--delta", re_delta);
  rest_cmd->add_option("--base-dim", re_base);
  rest_cmd->add_option("--field", re_field);
  rest_cmd->add_option("--samples", re_samples);
  rest_cmd->add_option("--seed", re_seed);

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "degeneration verification battery");
  int pi_degree = 1, pi_n = 3;
  std::string pi_params, pi_field = "GF(2^3)", pi_out;
  std::uint64_t pi_seed = 1;
  long long pi_budget = kDefaultScanBudget;
  pipe_cmd->add_option("--degree", pi_degree)->required();
  pipe_cmd->add_option("--n", pi_n)->required();
  pipe_cmd->add_option("--params", pi_params)->required();
  pipe_cmd->add_option("--field", pi_field);
  pipe_cmd->add_option("--seed", pi_seed);
  pipe_cmd->add_option("--budget", pi_budget);
  pipe_cmd->add_option("--out", pi_out, "write the JSON report here");

  // selftest
  auto* self_cmd = app.add_subcommand("selftest", "run the acceptance suite");
  bool self_quick = false;
  self_cmd->add_flag("--quick", self_quick, "shrink the pipeline batches");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*classify_cmd) {
      FamilyParams p = family_from(cl_degree, cl_n, parse_csv(cl_params));
      Verdict v = classify(p);
      if (json_out)
        std::cout << v.to_json(p) << "\n";
      else {
        std::cout << p.str() << " -> " << to_string(v.tag) << "\n";
        for (const auto& r : v.reasons) std::cout << "  " << r << "\n";
      }
      return 0;
    }
    if (*enum_cmd) {
      long mt = en_max_twist >= 0 ? en_max_twist : en_max;
      long mth = en_max_theta >= 0 ? en_max_theta : en_max;
      auto all = enumerate_families(en_degree, en_n, mt, mth);
      for (auto& [p, v] : all) {
        if (json_out)
          std::cout << v.to_json(p) << "\n";
        else
          std::cout << p.str() << " -> " << to_string(v.tag) << "\n";
      }
      return 0;
    }
    if (*basis_cmd) {
      BundleSpec spec = BundleSpec::from_json(read_file(ba_spec));
      auto bd = parse_csv(ba_bd);
      if (bd.size() != 2) throw CLI::ValidationError("--bidegree", "expects alpha,beta");
      auto mons = monomial_basis(spec, {bd[0], bd[1]});
      if (json_out) {
        nlohmann::json j = nlohmann::json::array();
        const GF& F = GF::get(2, 1);
        for (const auto& m : mons) {
          Poly t(spec.cox_ring(), F);
          t.add_term(m, 1);
          j.push_back(t.str());
        }
        std::cout << nlohmann::json({{"count", mons.size()}, {"monomials", j}}).dump() << "\n";
      } else {
        const GF& F = GF::get(2, 1);
        for (const auto& m : mons) {
          Poly t(spec.cox_ring(), F);
          t.add_term(m, 1);
          std::cout << t.str() << "\n";
        }
        std::cout << mons.size() << " monomials\n";
      }
      return 0;
    }
    if (*crit_cmd) {
      const GF& F = GF::parse(cr_field);
      std::vector<std::string> names;
      std::stringstream ss(cr_vars);
      std::string item;
      while (std::getline(ss, item, ',')) names.push_back(item);
      auto ring = Ring::make(names);
      Poly f = Poly::parse(ring, F, cr_poly);
      auto records = critical_points_census(f, cr_budget);
      nlohmann::json counts;
      int nd = 0, am = 0, dg = 0;
      nlohmann::json recs = nlohmann::json::array();
      for (const auto& r : records) {
        if (r.cls == CritClass::Nondegenerate) ++nd;
        if (r.cls == CritClass::AlmostNondegenerate) ++am;
        if (r.cls == CritClass::Degenerate) ++dg;
        nlohmann::json rj;
        rj["point"] = r.point;
        rj["class"] = to_string(r.cls);
        rj["hessian_rank"] = r.hessian_rank;
        if (r.local_length) rj["local_length"] = *r.local_length;
        recs.push_back(rj);
      }
      nlohmann::json j;
      j["field"] = F.name();
      j["counts"] = {{"nondegenerate", nd}, {"almost", am}, {"degenerate", dg}};
      j["records"] = recs;
      if (json_out)
        std::cout << j.dump() << "\n";
      else {
        std::cout << records.size() << " critical points over " << F.name() << ": " << nd
                  << " nondegenerate, " << am << " almost nondegenerate, " << dg
                  << " degenerate\n";
        for (const auto& r : records) {
          std::cout << "  (";
          for (size_t i = 0; i < r.point.size(); ++i)
            std::cout << (i ? "," : "") << F.format(r.point[i]);
          std::cout << ") " << to_string(r.cls) << "\n";
        }
      }
      return 0;
    }
    if (*rest_cmd) {
      const GF& F = GF::parse(re_field);
      auto rep = verify_surjrest_case(re_case, re_m, re_d, re_lambda, re_mu, re_delta, re_base, F,
                                      re_samples, re_seed);
      if (json_out)
        std::cout << rep.to_json() << "\n";
      else {
        std::cout << "case " << rep.case_id << " order " << rep.order << ": hypothesis "
                  << (rep.hypothesis_ok ? "holds" : "fails") << " (" << rep.hypothesis_note
                  << "), " << (rep.all_surjective ? "surjective at every point"
                                                  : "NOT surjective somewhere")
                  << " [" << rep.points.size() << " points]\n";
      }
      return rep.all_surjective ? 0 : 1;
    }
    if (*pipe_cmd) {
      FamilyParams p = family_from(pi_degree, pi_n, parse_csv(pi_params));
      const GF& F = GF::parse(pi_field);
      PipelineReport rep;
      try {
        rep = run_pipeline(p, F, pi_seed, pi_budget);
      } catch (const pipeline_not_applicable& e) {
        std::cerr << "not applicable: " << e.what() << "\n";
        return kExitNotApplicable;
      }
      std::string j = rep.to_json();
      if (!pi_out.empty()) {
        std::ofstream out(pi_out);
        out << j << "\n";
      }
      if (json_out)
        std::cout << j << "\n";
      else {
        std::cout << p.str() << " over " << F.name() << " seed " << pi_seed << " -> "
                  << to_string(rep.overall) << " (attempts: " << rep.attempts << ")\n";
        for (const auto& c : rep.checks)
          std::cout << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name << ": " << c.detail
                    << "\n";
      }
      return rep.overall == Overall::ObstructionWitnessed ? 0
             : rep.overall == Overall::PartialEvidence    ? 0
                                                          : kExitFailed;
    }
    if (*self_cmd) {
      auto results = run_acceptance(!self_quick);
      int failures = print_acceptance(results);
      return failures == 0 ? 0 : 1;
    }
  } catch (const budget_exceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::logic_error& e) {
    std::cerr << "internal consistency error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
