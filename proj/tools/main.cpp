// Command-line front door: one subcommand per capability, JSON to stdout,
// progress to stderr, all randomness from one seed (flag or CFN_SEED).
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfn/acceptance.hpp"
#include "cfn/cycint.hpp"
#include "cfn/equivariant.hpp"
#include "cfn/group.hpp"
#include "cfn/hessian.hpp"
#include "cfn/orbits.hpp"
#include "cfn/solver.hpp"

using json = nlohmann::ordered_json;
using namespace cfn;

namespace {

struct RunConfig {
  std::uint64_t seed = 12345;
  double tol_predicate = 1e-10;
  double tol_rank = 1e-8;
  double tol_cluster = 1e-4;
  double tol_newton = 1e-12;
  int workers = 1;
  std::string format = "json";
};

json fn_to_json(const CyclicFn& f) {
  json a = json::array();
  for (const auto& v : f.values) a.push_back({v.real(), v.imag()});
  return a;
}

CyclicFn fn_from_json(const json& a) {
  auto ctx = GroupCtx::make(std::int64_t(a.size()));
  CyclicFn f = CyclicFn::zero(ctx);
  for (std::int64_t k = 0; k < ctx.d; ++k)
    f.set(k, cx(a[k][0].get<double>(), a[k][1].get<double>()));
  return f;
}

json cycint_to_json(const CycInt& z) {
  json c = json::array();
  for (const auto& v : z.coeffs()) c.push_back(v.str());
  return json{{"m", z.conductor()}, {"coeffs", c}};
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<std::int64_t> parse_index_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

int cmd_jacobi(std::int64_t p, std::int64_t j1, std::int64_t j2, bool exact) {
  auto ctx = GroupCtx::make(p);
  CycInt J = jacobi_sum_exact(DirichletChar(ctx, j1), DirichletChar(ctx, j2));
  cx v = J.embed();
  json out{{"p", p}, {"j1", j1}, {"j2", j2}, {"complex", {v.real(), v.imag()}}};
  if (exact) out["cycint"] = cycint_to_json(J);
  emit(out);
  return 0;
}

int cmd_classify_ratio(std::int64_t p, std::int64_t t1, std::int64_t t2) {
  auto ctx = GroupCtx::make(p);
  auto r = ratio_is_root_of_unity(DirichletChar(ctx, t1), DirichletChar(ctx, t2));
  emit(json{{"p", p},
            {"t1", t1},
            {"t2", t2},
            {"root_of_unity", r.root_of_unity},
            {"exponent", r.exponent},
            {"case", std::string(1, ratio_case_letter(r.case_label))}});
  return 0;
}

int cmd_stickelberger(std::int64_t p, std::int64_t j, std::int64_t k) {
  auto row = [](std::int64_t p, std::int64_t j, std::int64_t k) {
    auto r = stickelberger_reduce(p, j, k);
    return json{{"j", j},          {"k", k},
                {"sum", r.sum_value},  {"binomial", r.binomial_value},
                {"agree", r.agree},    {"nonvanishing", r.nonvanishing}};
  };
  if (j > 0 && k > 0) {
    json out = row(p, j, k);
    out["p"] = p;
    emit(out);
    return 0;
  }
  json entries = json::array();
  for (std::int64_t jj = 1; jj < p - 1; ++jj)
    for (std::int64_t kk = 1; kk < p - 1; ++kk) entries.push_back(row(p, jj, kk));
  emit(json{{"p", p}, {"entries", entries}});
  return 0;
}

int cmd_lemma41_scan(std::int64_t d) {
  auto s = scan_all_pairs(d);
  json cases = json::object();
  for (const auto& [letter, count] : s.case_counts)
    cases[std::string(1, letter)] = count;
  json exc = json::array();
  for (const auto& pc : s.exceptional)
    exc.push_back(json{{"j", pc.j},
                       {"k", pc.k},
                       {"case", std::string(1, pair_case_letter(pc.exceptional_case))},
                       {"m", pc.case_param_m}});
  emit(json{{"d", d},
            {"total_pairs", s.total_pairs},
            {"consistent", s.consistent},
            {"case_counts", cases},
            {"exceptional", exc}});
  return s.consistent ? 0 : 1;
}

json transversality_report_json(const TransversalityReport& r) {
  return json{{"point", r.point_label},
              {"criterion_verdict", r.criterion_verdict},
              {"numeric_verdict", r.numeric_verdict},
              {"offending_psi_exponents", r.offending_psi_exponents},
              {"tangent_intersection_dim", r.tangent_intersection_dim}};
}

int cmd_transversality(std::int64_t p, bool all_subgroups, const RunConfig& cfg) {
  auto ctx = GroupCtx::make(p);
  json out{{"p", p}};
  if (p >= 11) {  // the setup chooser needs a proper subgroup of even order
    auto setup = classify_setup(p);
    out["safe_prime"] = setup.safe_prime;
    out["chosen_n"] = setup.n;
    out["chosen_c_exponent"] = setup.c_exponent;
  }
  if (all_subgroups) {
    json spaces = json::array();
    for (std::int64_t n = 2; n < p - 1; ++n) {
      if ((p - 1) % n != 0) continue;
      std::int64_t d_H = (p - 1) / n;
      for (std::int64_t ce = 1; ce < d_H; ++ce) {
        auto sp = EquivariantSpace::make(SubgroupChar::make(ctx, n, ce));
        json reports = json::array();
        bool all_ok = true;
        for (const auto& chi : sp.character_members) {
          auto r = transversal_at(chi, sp, cfg.tol_rank);
          all_ok = all_ok && (r.criterion_verdict == r.numeric_verdict);
          reports.push_back(transversality_report_json(r));
        }
        spaces.push_back(json{{"n", n},
                              {"c_exponent", ce},
                              {"verdicts_agree", all_ok},
                              {"characters", reports}});
      }
    }
    out["spaces"] = spaces;
  }
  emit(out);
  return 0;
}

int cmd_hessian(std::int64_t p, std::int64_t trials, const RunConfig& cfg) {
  auto cert = certify_anisotropy(p, trials, cfg.seed);
  emit(json{{"p", cert.p},
            {"dim", cert.dim},
            {"trials", cert.trials},
            {"min_norm_on_sphere", cert.min_norm_on_sphere},
            {"fiber_count", cert.fiber_count},
            {"expected_fiber", cert.expected_fiber},
            {"real_plus", cert.real_plus},
            {"real_minus", cert.real_minus},
            {"dichotomy_ok", cert.dichotomy_ok}});
  return cert.fiber_count == cert.expected_fiber && cert.dichotomy_ok ? 0 : 1;
}

int cmd_solve(std::int64_t d, const std::string& method, const RunConfig& cfg) {
  SolveMethod m =
      method == "total-degree" ? SolveMethod::total_degree : SolveMethod::lemma68_start;
  SolveOptions opts;
  opts.cluster_radius = cfg.tol_cluster;
  opts.newton_tol = cfg.tol_newton;
  std::cerr << "solve: d=" << d << " method=" << method << " seed=" << cfg.seed << "\n";
  auto set = solve_odd_cfunctions(d, m, cfg.seed, opts);
  if (cfg.format == "csv") {
    std::cout << "index,residual,multiplicity,is_dirichlet,dirichlet_exponent,"
                 "is_unimodular,is_real_valued\n";
    for (std::size_t i = 0; i < set.entries.size(); ++i) {
      const auto& e = set.entries[i];
      std::cout << i << "," << e.residual << "," << e.multiplicity << ","
                << e.tags.is_dirichlet << "," << e.tags.dirichlet_exponent << ","
                << e.tags.is_unimodular << "," << e.tags.is_real_valued << "\n";
    }
    return 0;
  }
  json sols = json::array();
  for (const auto& e : set.entries)
    sols.push_back(json{{"f", fn_to_json(e.f)},
                        {"g", fn_to_json(e.g)},
                        {"residual", e.residual},
                        {"multiplicity", e.multiplicity},
                        {"tags",
                         {{"is_dirichlet", e.tags.is_dirichlet},
                          {"dirichlet_exponent", e.tags.dirichlet_exponent},
                          {"is_unimodular", e.tags.is_unimodular},
                          {"is_real_valued", e.tags.is_real_valued}}}});
  emit(json{{"d", set.d},
            {"total_paths", set.total_paths},
            {"diverged", set.diverged},
            {"solutions", sols}});
  return 0;
}

int cmd_biunimodular(std::int64_t p, std::int64_t trials, const RunConfig& cfg) {
  std::cerr << "biunimodular: p=" << p << " trials=" << trials << " seed=" << cfg.seed
            << "\n";
  auto rep = biunimodular_search(p, trials, cfg.seed);
  json fns = json::array();
  for (const auto& h : rep.functions)
    fns.push_back(json{{"f", fn_to_json(h.f)},
                       {"residual", h.residual},
                       {"tag", h.tag},
                       {"hits", h.hits}});
  emit(json{{"p", rep.p},
            {"trials", rep.trials},
            {"converged", rep.converged},
            {"gaussian_found", rep.gaussian_found},
            {"bs_translate_found", rep.bs_translate_found},
            {"new_found", rep.new_found},
            {"functions", fns}});
  return 0;
}

int cmd_uncertainty(const std::string& fn_file, const RunConfig& cfg) {
  json a;
  if (fn_file.empty() || fn_file == "-") {
    std::cin >> a;
  } else {
    std::ifstream in(fn_file);
    if (!in) {
      std::cerr << "cannot open " << fn_file << "\n";
      return 2;
    }
    in >> a;
  }
  CyclicFn f = fn_from_json(a);
  auto r = uncertainty_check(f, cfg.tol_predicate);
  emit(json{{"p", f.d()},
            {"supp_f", r.supp_f},
            {"supp_fhat", r.supp_fhat},
            {"holds", r.holds},
            {"equality", r.equality}});
  return r.holds ? 0 : 1;
}

int cmd_chebotarev(std::int64_t p, const std::string& rows, const std::string& cols) {
  auto A = parse_index_list(rows), B = parse_index_list(cols);
  CycInt m = chebotarev_minor(p, A, B);
  emit(json{{"p", p},
            {"rows", A},
            {"cols", B},
            {"minor", cycint_to_json(m)},
            {"nonzero", !m.is_zero()}});
  return m.is_zero() ? 1 : 0;
}

int cmd_verify(const std::string& level, const RunConfig& cfg) {
  auto rep = run_acceptance(level == "full", cfg.seed, &std::cerr);
  json rows = json::array();
  for (const auto& r : rep.results)
    rows.push_back(json{{"id", r.id},
                        {"name", r.name},
                        {"pass", r.pass},
                        {"seconds", r.seconds},
                        {"detail", r.detail}});
  emit(json{{"level", level}, {"all_pass", rep.all_pass()}, {"criteria", rows}});
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolkit for autocorrelation-flat and biunimodular functions on "
               "cyclic groups"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  RunConfig cfg;
  if (const char* env = std::getenv("CFN_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
  app.add_option("--seed", cfg.seed, "random seed (env CFN_SEED overrides the default)");
  app.add_option("--tol-predicate", cfg.tol_predicate, "predicate tolerance");
  app.add_option("--tol-rank", cfg.tol_rank, "rank tolerance");
  app.add_option("--tol-cluster", cfg.tol_cluster, "clustering radius");
  app.add_option("--tol-newton", cfg.tol_newton, "refinement tolerance");
  app.add_option("--workers", cfg.workers, "worker count");

  std::int64_t p = 7, d = 7, j1 = 1, j2 = 1, j = 0, k = 0, trials = 1000;
  bool exact = false, all_subgroups = false;
  std::string method = "lemma68", level = "fast", rows, cols, fn_file;

  auto* jac = app.add_subcommand("jacobi", "exact character sum over a prime field");
  jac->add_option("--p", p)->required();
  jac->add_option("--j1", j1)->required();
  jac->add_option("--j2", j2)->required();
  jac->add_flag("--exact", exact, "include the exact cyclotomic value");

  auto* rat = app.add_subcommand("classify-ratio", "root-of-unity test for the sum ratio");
  rat->add_option("--p", p)->required();
  rat->add_option("--t1", j1)->required();
  rat->add_option("--t2", j2)->required();

  auto* sti = app.add_subcommand("stickelberger", "mod-p reduction vs binomial");
  sti->add_option("--p", p)->required();
  sti->add_option("--j", j);
  sti->add_option("--k", k);

  auto* scan = app.add_subcommand("lemma41-scan", "orbit representative scan");
  scan->add_option("--d", d)->required();

  auto* tra = app.add_subcommand("transversality", "criterion vs tangent rank");
  tra->add_option("--p", p)->required();
  tra->add_flag("--all-subgroups", all_subgroups);

  auto* hes = app.add_subcommand("hessian", "second-order certificate at the "
                                            "quadratic character");
  hes->add_option("--p", p)->required();
  hes->add_option("--trials", trials);

  auto* sol = app.add_subcommand("solve", "count odd autocorrelation-flat functions");
  sol->add_option("--d", d)->required();
  sol->add_option("--method", method)->check(CLI::IsMember({"lemma68", "total-degree"}));
  sol->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));

  auto* biu = app.add_subcommand("biunimodular", "random-start search on the phase torus");
  biu->add_option("--p", p)->required();
  biu->add_option("--trials", trials);

  auto* unc = app.add_subcommand("uncertainty", "support inequality for a function "
                                                "read as JSON [[re,im],...]");
  unc->add_option("--f", fn_file, "input file, - or empty for stdin");

  auto* che = app.add_subcommand("chebotarev", "exact minor of the root-of-unity matrix");
  che->add_option("--p", p)->required();
  che->add_option("--rows", rows, "comma-separated row indices")->required();
  che->add_option("--cols", cols, "comma-separated column indices")->required();

  auto* ver = app.add_subcommand("verify", "run the acceptance suite");
  ver->add_option("--level", level)->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (jac->parsed()) return cmd_jacobi(p, j1, j2, exact);
    if (rat->parsed()) return cmd_classify_ratio(p, j1, j2);
    if (sti->parsed()) return cmd_stickelberger(p, j, k);
    if (scan->parsed()) return cmd_lemma41_scan(d);
    if (tra->parsed()) return cmd_transversality(p, all_subgroups, cfg);
    if (hes->parsed()) return cmd_hessian(p, trials, cfg);
    if (sol->parsed()) return cmd_solve(d, method, cfg);
    if (biu->parsed()) return cmd_biunimodular(p, trials, cfg);
    if (unc->parsed()) return cmd_uncertainty(fn_file, cfg);
    if (che->parsed()) return cmd_chebotarev(p, rows, cols);
    if (ver->parsed()) return cmd_verify(level, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
