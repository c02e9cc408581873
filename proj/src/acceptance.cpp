#include "cfn/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "cfn/cycint.hpp"
#include "cfn/equivariant.hpp"
#include "cfn/group.hpp"
#include "cfn/hessian.hpp"
#include "cfn/orbits.hpp"
#include "cfn/solver.hpp"

namespace cfn {

bool AcceptanceReport::all_pass() const {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

namespace {

/// Collects failed sub-checks of one criterion; keeps the first few messages.
struct Checker {
  std::int64_t checked = 0, failed = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    ++failed;
    if (first.empty()) first = what;
  }
  std::string summary() const {
    std::ostringstream os;
    if (failed == 0) {
      os << checked << " checks";
    } else {
      os << failed << "/" << checked << " checks failed; first: " << first;
    }
    return os.str();
  }
};

std::vector<std::int64_t> primes_upto(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 3; p <= n; ++p)
    if (is_prime_int(p)) out.push_back(p);
  return out;
}

std::vector<CyclicFn> full_delta_basis(const GroupCtx& ctx) {
  std::vector<CyclicFn> basis;
  for (std::int64_t j = 0; j < ctx.d; ++j) basis.push_back(CyclicFn::delta(ctx, j));
  return basis;
}

// ---- criterion 1: pinned exact Jacobi sums ---------------------------------

void crit_jacobi_exact(Checker& c) {
  struct Pin {
    std::int64_t p, t1, t2;
    std::int64_t int_part, zeta_coeff, zeta_exp;  // value = int + coeff * zeta^exp
  };
  // printed values rewritten in the power basis of Z[zeta_{p-1}]:
  // i*sqrt(3) = 2 zeta_6 - 1 and i = zeta_4
  const Pin pins[] = {
      {7, 3, 2, 3, -2, 1},        // 2 - i sqrt3  = 3 - 2 zeta_6
      {37, 9, 6, -7, 4, 6},       // -5 + 2i sqrt3 = -7 + 4 zeta_36^6
      {73, 24, 18, 8, 3, 18},     // 8 + 3i        = 8 + 3 zeta_72^18
      {109, 36, 18, 5, -12, 18},  // -1 - 6i sqrt3 = 5 - 12 zeta_108^18
  };
  for (const auto& pin : pins) {
    auto ctx = GroupCtx::make(pin.p);
    CycInt J = jacobi_sum_exact(DirichletChar(ctx, pin.t1), DirichletChar(ctx, pin.t2));
    const std::int64_t m = pin.p - 1;
    CycInt expect = CycInt::integer(m, pin.int_part) +
                    CycInt::integer(m, pin.zeta_coeff) * CycInt::zeta_power(m, pin.zeta_exp);
    // the listed values are pinned up to complex conjugation: the list itself
    // is not consistent with a single embedding convention
    c.expect(J == expect || J == expect.galois(m - 1),
             "jacobi value mismatch at p=" + std::to_string(pin.p));
  }
}

// ---- criterion 2: root-of-unity ratio <=> seven-case membership ------------

void crit_ratio_equivalence(Checker& c, std::int64_t pmax) {
  for (std::int64_t p : primes_upto(pmax)) {
    auto ctx = GroupCtx::make(p);
    for (std::int64_t t1 = 1; t1 < p - 1; ++t1)
      for (std::int64_t t2 = 1; t2 < p - 1; ++t2) {
        auto r = ratio_is_root_of_unity(DirichletChar(ctx, t1), DirichletChar(ctx, t2));
        c.expect(r.root_of_unity == (r.case_label != RatioCase::none),
                 "verdict/case mismatch at p=" + std::to_string(p) + " (" +
                     std::to_string(t1) + "," + std::to_string(t2) + ")");
      }
  }
}

// ---- criterion 3: mod-p reduction equals the binomial ----------------------

void crit_stickelberger(Checker& c, std::int64_t pmax) {
  for (std::int64_t p : primes_upto(pmax)) {
    for (std::int64_t j = 1; j < p - 1; ++j)
      for (std::int64_t k = 1; k < p - 1; ++k) {
        auto r = stickelberger_reduce(p, j, k);
        c.expect(r.agree, "sum != binomial at p=" + std::to_string(p));
        c.expect(r.nonvanishing == (j + k < p),
                 "vanishing pattern off at p=" + std::to_string(p));
      }
  }
}

// ---- criterion 4: representative search fails exactly on the families ------

void crit_orbit_scan(Checker& c, std::int64_t dmax) {
  for (std::int64_t d = 2; d <= dmax; ++d) {
    auto s = scan_all_pairs(d);
    c.expect(s.consistent, "classifier/brute-force mismatch at d=" + std::to_string(d));
  }
}

// ---- criteria 5/6: solution counting and method agreement ------------------

void crit_counts(Checker& c, bool full, std::uint64_t seed, double* d13_seconds) {
  struct Row {
    std::int64_t d, total, entries, chi0_mult, unimod, dirichlet;
    SolveMethod method;
  };
  std::vector<Row> rows = {
      {7, 6, 3, 4, 6, 3, SolveMethod::lemma68_start},
      {9, 18, 18, 0, 12, 0, SolveMethod::total_degree},
      {11, 70, 55, 16, 30, 5, SolveMethod::lemma68_start},
  };
  if (full) rows.push_back({13, 252, 252, 0, 60, 6, SolveMethod::lemma68_start});

  for (const auto& row : rows) {
    auto t0 = std::chrono::steady_clock::now();
    auto set = solve_odd_cfunctions(row.d, row.method, seed);
    auto t1 = std::chrono::steady_clock::now();
    if (row.d == 13 && d13_seconds)
      *d13_seconds = std::chrono::duration<double>(t1 - t0).count();

    const std::string at = " at d=" + std::to_string(row.d);
    c.expect(set.total_multiplicity() == row.total, "total multiplicity" + at);
    c.expect(std::int64_t(set.entries.size()) == row.entries, "cluster count" + at);
    c.expect(set.unimodular_multiplicity() == row.unimod, "unimodular count" + at);
    c.expect(set.dirichlet_count() == row.dirichlet, "character count" + at);
    c.expect(set.total_multiplicity() + set.diverged == set.total_paths,
             "path conservation" + at);
    std::int64_t chi0 = 0;
    for (const auto& e : set.entries) {
      c.expect(e.residual <= 1e-8, "residual" + at);
      if (e.multiplicity > 1) chi0 = e.multiplicity;
    }
    c.expect(chi0 == row.chi0_mult, "quadratic-character multiplicity" + at);
    // consistency with the torus-intersection lower bound 2^{n-1}
    if (set.d != 9) {
      std::int64_t n = (set.d - 1) / 2;
      c.expect(set.total_multiplicity() >= (std::int64_t(1) << (n - 1)),
               "count below the intersection bound" + at);
    }

    if (row.d == 11) {
      // the named real-valued family: five Galois conjugates of
      // chi0(k) (c(k^2) + 2 c(4 k^2)), c(m) = cos(2 pi m / 11), plus their
      // five pointwise inverses, all carrying the real-valued tag
      auto ctx = GroupCtx::make(11);
      auto chi0_ch = legendre_char(ctx);
      std::int64_t found = 0, found_inv = 0;
      for (std::int64_t s = 1; s <= 5; ++s) {
        CyclicFn f = CyclicFn::zero(ctx);
        for (std::int64_t k = 1; k < 11; ++k) {
          auto cc = [&](std::int64_t mm) {
            return std::cos(2.0 * std::numbers::pi * double(mm * s % 11) / 11.0);
          };
          f.set(k, chi0_ch.eval(k).real() * (cc(k * k % 11) + 2.0 * cc(4 * k * k % 11)));
        }
        f = (1.0 / f.at(1)) * f;
        CyclicFn g = CyclicFn::zero(ctx);
        for (std::int64_t k = 1; k < 11; ++k) g.set(k, 1.0 / f.at(k));
        for (const auto& e : set.entries) {
          if (e.f.sup_dist(f) < 1e-6 && e.tags.is_real_valued) ++found;
          if (e.f.sup_dist(g) < 1e-6 && e.tags.is_real_valued) ++found_inv;
        }
      }
      c.expect(found == 5, "real-valued family members at d=11");
      c.expect(found_inv == 5, "real-valued family inverses at d=11");
    }
  }
}

void crit_method_agreement(Checker& c, std::uint64_t seed) {
  for (std::int64_t d : {7, 11}) {
    auto a = solve_odd_cfunctions(d, SolveMethod::lemma68_start, seed);
    auto b = solve_odd_cfunctions(d, SolveMethod::total_degree, seed + 1);
    const std::string at = " at d=" + std::to_string(d);
    c.expect(a.entries.size() == b.entries.size(), "cluster count differs" + at);
    if (a.entries.size() != b.entries.size()) continue;
    // compare the solution sets; the path multiplicities of the two methods
    // are not comparable (excess start paths can double-hit a simple point)
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      c.expect(a.entries[i].f.sup_dist(b.entries[i].f) < 1e-6, "solution differs" + at);
      c.expect(a.entries[i].tags.is_dirichlet == b.entries[i].tags.is_dirichlet &&
                   a.entries[i].tags.is_unimodular == b.entries[i].tags.is_unimodular,
               "tags differ" + at);
    }
  }
}

// ---- criterion 7: transversality criterion vs tangent rank -----------------

void crit_transversality(Checker& c) {
  for (std::int64_t p : {5, 7, 11, 13}) {
    auto ctx = GroupCtx::make(p);
    for (std::int64_t n = 2; n < p - 1; ++n) {
      if ((p - 1) % n != 0) continue;
      std::int64_t d_H = (p - 1) / n;
      for (std::int64_t ce = 1; ce < d_H; ++ce) {
        auto sp = EquivariantSpace::make(SubgroupChar::make(ctx, n, ce));
        for (const auto& chi : sp.character_members) {
          auto rep = transversal_at(chi, sp);
          c.expect(rep.criterion_verdict == rep.numeric_verdict,
                   "criterion != tangent rank at p=" + std::to_string(p));
        }
      }
    }
  }
  for (std::int64_t p : {3, 5, 7, 11, 13}) {
    auto ctx = GroupCtx::make(p);
    c.expect(numeric_transversal_at(gaussian(ctx, 1, 0), full_delta_basis(ctx), false)
                 .numeric_verdict,
             "gaussian point not transverse at p=" + std::to_string(p));
  }
  for (std::int64_t p : {5, 7, 11, 13}) {
    auto ctx = GroupCtx::make(p);
    for (const auto& h : bjorck_saffari(ctx))
      c.expect(numeric_transversal_at(h, full_delta_basis(ctx), false).numeric_verdict,
               "invariant-family point not transverse at p=" + std::to_string(p));
  }
  for (std::int64_t p : {7, 11}) {
    auto ctx = GroupCtx::make(p);
    auto sp = EquivariantSpace::make(SubgroupChar::make(ctx, (p - 1) / 2, 1));
    auto rep = transversal_at(DirichletChar(ctx, (p - 1) / 2), sp);
    c.expect(!rep.criterion_verdict && !rep.numeric_verdict,
             "quadratic character transverse on the odd space at p=" + std::to_string(p));
  }
}

// ---- criterion 8: second-order behaviour at the quadratic character --------

void crit_hessian(Checker& c, bool full, std::uint64_t seed) {
  for (std::int64_t p : {7, 11}) {
    auto ch = LegendreChart::make(p);
    double h = 1e-4, dnorm = 0;
    for (std::int64_t k = 0; k < ch.m; ++k) {
      CVec e = CVec::Zero(ch.m);
      e(k) = h;
      CyclicFn col =
          legendre_defect(ch, ch.from_coords(e)) - legendre_defect(ch, ch.from_coords(-e));
      dnorm = std::max(dnorm, (1.0 / (2 * h)) * col.norm2());
    }
    c.expect(dnorm < 1e-6, "differential at 0 not flat at p=" + std::to_string(p));

    std::int64_t trials = full ? 10000 : (p == 7 ? 300 : 60);
    auto cert = certify_anisotropy(p, trials, seed);
    c.expect(cert.fiber_count == cert.expected_fiber,
             "regular fiber count at p=" + std::to_string(p));
    c.expect(cert.min_norm_on_sphere > (p == 7 ? 1e-2 : 1e-3),
             "sphere minimum below floor at p=" + std::to_string(p));
    c.expect(cert.dichotomy_ok, "real-point dichotomy at p=" + std::to_string(p));
  }
}

// ---- criterion 9: support uncertainty and nonvanishing minors --------------

void crit_uncertainty_chebotarev(Checker& c, bool full, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const std::int64_t samples = full ? 10000 : 1000;
  for (std::int64_t p : {5, 7, 11, 13}) {
    auto ctx = GroupCtx::make(p);
    for (std::int64_t s = 0; s < samples; ++s) {
      CyclicFn f = CyclicFn::zero(ctx);
      std::int64_t size = 1 + std::int64_t(rng() % std::uint64_t(p));
      for (std::int64_t j = 0; j < size; ++j)
        f.set(std::int64_t(rng() % std::uint64_t(p)), cx(nd(rng), nd(rng)));
      if (f.norm2() == 0.0) continue;
      c.expect(uncertainty_check(f).holds, "inequality failed at p=" + std::to_string(p));
    }
  }
  // the kernel start functions meet the inequality with equality
  for (std::int64_t p : {7, 11, 13}) {
    auto ctx = GroupCtx::make(p);
    auto sp = EquivariantSpace::make(SubgroupChar::make(ctx, (p - 1) / 2, 1));
    for (const auto& s : start_fiber(sp))
      c.expect(uncertainty_check(s.f).equality,
               "kernel function not extremal at p=" + std::to_string(p));
  }

  // minors of the root-of-unity matrix
  auto all_subsets = [](std::int64_t p, std::int64_t k) {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> idx(k);
    for (std::int64_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      out.push_back(idx);
      std::int64_t i = k - 1;
      while (i >= 0 && idx[i] == p - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (std::int64_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
  };
  for (std::int64_t p : {3, 5, 7}) {
    for (std::int64_t k = 1; k <= p; ++k) {
      auto subs = all_subsets(p, k);
      for (const auto& A : subs)
        for (const auto& B : subs)
          c.expect(!chebotarev_minor(p, A, B).is_zero(),
                   "vanishing minor at p=" + std::to_string(p));
    }
  }
  for (std::int64_t p : {11, 13}) {
    std::int64_t kmax = full ? 3 : 2;
    for (std::int64_t k = 2; k <= kmax; ++k) {
      auto subs = all_subsets(p, k);
      for (const auto& A : subs)
        for (const auto& B : subs)
          c.expect(!chebotarev_minor(p, A, B).is_zero(),
                   "vanishing minor at p=" + std::to_string(p));
    }
  }
}

// ---- criterion 10: biunimodular families and the search --------------------

void crit_biunimodular(Checker& c, bool full, std::uint64_t seed) {
  for (std::int64_t p : {5, 7, 11, 13}) {
    auto ctx = GroupCtx::make(p);
    for (std::int64_t m = 1; m < p; ++m)
      for (std::int64_t a = 0; a < p; ++a)
        c.expect(biunimodular_residual(gaussian(ctx, m, a), false) < 1e-10,
                 "gaussian residual at p=" + std::to_string(p));
    for (const auto& h0 : bjorck_saffari(ctx))
      for (std::int64_t a = 0; a < p; ++a) {
        CyclicFn ha = CyclicFn::zero(ctx);
        for (std::int64_t x = 0; x < p; ++x) ha.set(x, h0.at(x - a));
        c.expect(biunimodular_residual(ha, false) < 1e-10,
                 "invariant-family residual at p=" + std::to_string(p));
      }
  }

  const std::int64_t p = 11;
  auto ctx = GroupCtx::make(p);
  auto rep = biunimodular_search(p, full ? 30000 : 3000, seed);
  if (full) {
    c.expect(rep.gaussian_found == (p - 1) * p, "not all gaussians rediscovered");
    // all 4p plain translates of the invariant family are among the hits
    std::int64_t translates = 0;
    for (const auto& h0 : bjorck_saffari(ctx))
      for (std::int64_t a = 0; a < p; ++a) {
        CyclicFn ha = CyclicFn::zero(ctx);
        for (std::int64_t x = 0; x < p; ++x) ha.set(x, h0.at(x - a));
        ha = (1.0 / ha.at(0)) * ha;
        for (const auto& hit : rep.functions)
          if (hit.f.sup_dist(ha) < 1e-6) {
            ++translates;
            break;
          }
      }
    c.expect(translates == 4 * p, "not all invariant-family translates rediscovered");
    // consistency with the torus-intersection lower bound 2^{p-1}
    c.expect(std::int64_t(rep.functions.size()) >= (std::int64_t(1) << (p - 1)),
             "fewer points than the intersection bound");
  } else {
    c.expect(rep.gaussian_found > 0, "no gaussian rediscovered");
    c.expect(rep.bs_translate_found > 0, "no invariant-family translate rediscovered");
  }
  c.expect(rep.new_found > 0, "no unclassified function found");
  // the gate: everything reported, NEW tags included, certifies independently
  for (const auto& hit : rep.functions) {
    bool ok = is_biunimodular(hit.f, false, 1e-8) && hit.residual < 1e-10;
    c.expect(ok, "reported function fails certification");
    if (!ok) break;
  }
}

CriterionResult timed(int id, const std::string& name,
                      const std::function<void(Checker&)>& body, std::ostream* progress,
                      double budget_seconds = 0.0) {
  Checker c;
  auto t0 = std::chrono::steady_clock::now();
  body(c);
  auto t1 = std::chrono::steady_clock::now();
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.seconds = std::chrono::duration<double>(t1 - t0).count();
  r.pass = c.failed == 0;
  r.detail = c.summary();
  if (budget_seconds > 0.0 && r.seconds > budget_seconds) {
    r.pass = false;
    r.detail += "; over time budget";
  }
  if (progress)
    (*progress) << "criterion " << id << " [" << (r.pass ? "pass" : "FAIL") << "] "
                << name << " (" << r.seconds << " s; " << r.detail << ")\n";
  return r;
}

}  // namespace

AcceptanceReport run_acceptance(bool full, std::uint64_t seed, std::ostream* progress) {
  AcceptanceReport rep;
  auto add = [&](int id, const std::string& name,
                 const std::function<void(Checker&)>& body, double budget = 0.0) {
    rep.results.push_back(timed(id, name, body, progress, budget));
  };

  add(1, "pinned exact jacobi sums", [&](Checker& c) { crit_jacobi_exact(c); }, 1.0);
  add(2, "root-of-unity ratio equals seven-case membership",
      [&](Checker& c) { crit_ratio_equivalence(c, full ? 31 : 19); }, 30.0);
  add(3, "mod-p reduction equals the binomial",
      [&](Checker& c) { crit_stickelberger(c, full ? 31 : 19); }, 5.0);
  add(4, "representative search fails exactly on the families",
      [&](Checker& c) { crit_orbit_scan(c, full ? 120 : 60); }, 60.0);
  double d13_seconds = 0.0;
  add(5, "solution counts with multiplicities",
      [&](Checker& c) {
        crit_counts(c, full, seed, &d13_seconds);
        if (full) c.expect(d13_seconds < 300.0, "d=13 run over five minutes");
      });
  add(6, "start-fiber and total-degree methods agree",
      [&](Checker& c) { crit_method_agreement(c, seed); });
  add(7, "transversality criterion equals tangent rank",
      [&](Checker& c) { crit_transversality(c); }, 60.0);
  add(8, "second-order behaviour at the quadratic character",
      [&](Checker& c) { crit_hessian(c, full, seed); }, 120.0);
  add(9, "support uncertainty and nonvanishing minors",
      [&](Checker& c) { crit_uncertainty_chebotarev(c, full, seed); }, 60.0);
  add(10, "biunimodular families and search",
      [&](Checker& c) { crit_biunimodular(c, full, seed); }, 600.0);
  return rep;
}

}  // namespace cfn
