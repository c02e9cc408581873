#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "cfn/cycint.hpp"
#include "cfn/solver.hpp"
#include "doctest.h"

using namespace cfn;

namespace {

std::vector<std::int64_t> sorted_dirichlet_exponents(const SolutionSet& set) {
  std::vector<std::int64_t> out;
  for (const auto& e : set.entries)
    if (e.tags.is_dirichlet) out.push_back(e.tags.dirichlet_exponent);
  std::sort(out.begin(), out.end());
  return out;
}

const SolutionEntry* find_close(const SolutionSet& set, const CyclicFn& f, double tol) {
  for (const auto& e : set.entries)
    if (e.f.sup_dist(f) < tol) return &e;
  return nullptr;
}

// the explicit real-valued family at p=11 and its Galois conjugates
// (conjugation acts on the cosines by k -> sk), normalized to f(1) = 1
CyclicFn cosine_family_member(const GroupCtx& ctx, std::int64_t s) {
  auto chi0 = legendre_char(ctx);
  const std::int64_t p = ctx.d;
  CyclicFn f = CyclicFn::zero(ctx);
  for (std::int64_t k = 1; k < p; ++k) {
    auto c = [&](std::int64_t m) {
      return std::cos(2.0 * std::numbers::pi * double(m * s % p) / double(p));
    };
    f.set(k, chi0.eval(k).real() * (c(k * k % p) + 2.0 * c(4 * k * k % p)));
  }
  return (1.0 / f.at(1)) * f;
}

CyclicFn pointwise_inverse_off_0(const CyclicFn& f) {
  CyclicFn g = CyclicFn::zero(f.ctx);
  for (std::int64_t x = 1; x < f.d(); ++x) g.set(x, 1.0 / f.at(x));
  return g;
}

}  // namespace

TEST_CASE("square coordinates for the odd counting problem") {
  auto sys = OddSystem::make(9);
  CHECK(sys.n == 4);
  CHECK(sys.dim == 6);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd(0.0, 1.0);
  CVec z(sys.dim);
  for (std::int64_t i = 0; i < sys.dim; ++i) z(i) = cx(nd(rng), nd(rng));

  SUBCASE("pack round-trips through the odd extension") {
    CyclicFn f = sys.f_of(z), g = sys.g_of(z);
    CHECK(f.at(0) == cx(0, 0));
    CHECK(f.at(1) == cx(1, 0));
    for (std::int64_t x = 1; x <= sys.n; ++x) CHECK(f.at(-x) == -f.at(x));
    CHECK((sys.pack(f, g) - z).norm() == 0.0);
  }

  SUBCASE("jacobian matches central differences") {
    CMat jac = sys.jacobian(z);
    const CVec target = sys.target_point();
    for (std::int64_t k = 0; k < sys.dim; ++k) {
      CVec e = CVec::Zero(sys.dim);
      e(k) = 1e-6;
      CVec fd = (sys.residual(z + e, target) - sys.residual(z - e, target)) / 2e-6;
      CHECK((jac.col(k) - fd).norm() < 1e-7);
    }
  }

  SUBCASE("odd Dirichlet characters solve the end equations exactly") {
    auto s7 = OddSystem::make(7);
    for (std::int64_t t : {1, 3, 5}) {
      DirichletChar chi(s7.ctx, t);
      REQUIRE(chi.odd());
      CVec zc = s7.pack(chi.fn(), chi.conj().fn());
      CHECK(s7.residual(zc, s7.target_point()).norm() < 1e-12);
    }
  }
}

TEST_CASE("split-fiber start solutions") {
  for (std::int64_t p : {7, 11, 13}) {
    auto sys = OddSystem::make(p);
    auto space = EquivariantSpace::make(SubgroupChar::make(sys.ctx, sys.n, 1));
    auto starts = start_fiber(space);

    // count C(2n-2, n-1): 6, 70, 252
    std::int64_t expect = p == 7 ? 6 : p == 11 ? 70 : 252;
    CHECK(std::int64_t(starts.size()) == expect);

    const CVec w0 = sys.target_start();
    double min_sv = 1e9;
    for (const auto& sp : starts) {
      // each start solves the split-fiber equations in the square coordinates
      CVec z = sys.pack(sp.f, sp.g);
      CHECK(sys.residual(z, w0).norm() < 1e-9);

      // support sizes meet the uncertainty inequality with equality
      auto rep = uncertainty_check(sp.f);
      CHECK(rep.holds);
      CHECK(rep.equality);
      CHECK(rep.supp_f + rep.supp_fhat == p + 1);

      if (p <= 11) {
        Eigen::JacobiSVD<CMat> svd(sys.jacobian(z));
        min_sv = std::min(min_sv, svd.singularValues().minCoeff());
      }
    }
    // start regularity: the square jacobian is uniformly invertible
    if (p <= 11) CHECK(min_sv > 1e-6);
  }

  // the subgroup must contain -1 for the conjugation trick
  auto ctx13 = GroupCtx::make(13);
  CHECK_THROWS(start_fiber(EquivariantSpace::make(SubgroupChar::make(ctx13, 4, 1))));
}

TEST_CASE("counting odd solutions at d=7") {
  auto set = solve_odd_cfunctions(7, SolveMethod::lemma68_start, 1);
  CHECK(set.total_paths == 6);
  CHECK(set.diverged == 0);
  CHECK(set.total_multiplicity() == 6);
  CHECK(set.total_multiplicity() + set.diverged == set.total_paths);
  REQUIRE(set.entries.size() == 3);
  CHECK(set.unimodular_multiplicity() == 6);
  CHECK(set.dirichlet_count() == 3);
  CHECK(sorted_dirichlet_exponents(set) == std::vector<std::int64_t>{1, 3, 5});
  for (const auto& e : set.entries) {
    CHECK(e.residual < 1e-10);
    CHECK(e.tags.is_unimodular);
    CHECK(is_c_function(e.f, 1e-8));
    // quadratic character carries the whole multiplicity 4
    if (e.tags.dirichlet_exponent == 3)
      CHECK(e.multiplicity == 4);
    else
      CHECK(e.multiplicity == 1);
    // unimodular entries have the conjugate partner
    for (std::int64_t x = 1; x < 7; ++x)
      CHECK(std::abs(e.g.at(x) - std::conj(e.f.at(x))) < 1e-8);
  }
}

TEST_CASE("counting odd solutions at d=9 by total degree") {
  auto set = solve_odd_cfunctions(9, SolveMethod::total_degree, 5);
  CHECK(set.total_paths == 64);
  CHECK(set.total_multiplicity() == 18);
  CHECK(set.total_multiplicity() + set.diverged == set.total_paths);
  REQUIRE(set.entries.size() == 18);  // all multiplicity one
  CHECK(set.unimodular_multiplicity() == 12);
  CHECK(set.dirichlet_count() == 0);
  for (const auto& e : set.entries) {
    CHECK(e.multiplicity == 1);
    CHECK(e.residual < 1e-10);
    CHECK(is_c_function(e.f, 1e-8));
    if (e.tags.is_unimodular) CHECK(is_biunimodular(e.f, true, 1e-8));
  }
}

TEST_CASE("counting odd solutions at d=11") {
  auto set = solve_odd_cfunctions(11, SolveMethod::lemma68_start, 1);
  CHECK(set.total_paths == 70);
  CHECK(set.diverged == 0);
  CHECK(set.total_multiplicity() == 70);
  REQUIRE(set.entries.size() == 55);
  CHECK(set.unimodular_multiplicity() == 30);
  CHECK(set.dirichlet_count() == 5);
  CHECK(sorted_dirichlet_exponents(set) == std::vector<std::int64_t>{1, 3, 5, 7, 9});

  for (const auto& e : set.entries) {
    CHECK(e.residual < 1e-10);
    CHECK(is_c_function(e.f, 1e-8));
    if (e.tags.dirichlet_exponent == 5)
      CHECK(e.multiplicity == 16);  // quadratic character cluster
    else
      CHECK(e.multiplicity == 1);
  }

  SUBCASE("the explicit real family and its inverses are present") {
    for (std::int64_t s = 1; s <= 5; ++s) {
      CyclicFn f = cosine_family_member(set.entries[0].f.ctx, s);
      const SolutionEntry* e = find_close(set, f, 1e-8);
      REQUIRE(e != nullptr);
      CHECK(e->tags.is_real_valued);
      CHECK_FALSE(e->tags.is_unimodular);
      CyclicFn g = (1.0 / pointwise_inverse_off_0(f).at(1)) * pointwise_inverse_off_0(f);
      const SolutionEntry* ei = find_close(set, g, 1e-8);
      REQUIRE(ei != nullptr);
      CHECK(ei->tags.is_real_valued);
    }
    // besides the quadratic character and that 5+5 family, the largest
    // Galois orbit contributes ten more real entries: 21 in total
    CHECK(set.real_valued_count() == 21);
  }
}

TEST_CASE("counting odd solutions at d=13") {
  auto set = solve_odd_cfunctions(13, SolveMethod::lemma68_start, 1);
  CHECK(set.total_paths == 252);
  CHECK(set.diverged == 0);
  CHECK(set.total_multiplicity() == 252);
  REQUIRE(set.entries.size() == 252);  // all multiplicity one
  CHECK(set.unimodular_multiplicity() == 60);
  CHECK(set.dirichlet_count() == 6);
  // two characters of order 4, four of order 12
  CHECK(sorted_dirichlet_exponents(set) == std::vector<std::int64_t>{1, 3, 5, 7, 9, 11});
  for (const auto& e : set.entries) {
    CHECK(e.multiplicity == 1);
    CHECK(e.residual < 1e-10);
  }
}

TEST_CASE("both methods find the same clustered solutions") {
  for (std::int64_t d : {7, 11}) {
    auto a = solve_odd_cfunctions(d, SolveMethod::lemma68_start, 1);
    auto b = solve_odd_cfunctions(d, SolveMethod::total_degree, 3);
    CHECK(a.total_multiplicity() == b.total_multiplicity());
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      // canonical order makes the multisets comparable entry by entry
      CHECK(a.entries[i].f.sup_dist(b.entries[i].f) < 1e-6);
      CHECK(a.entries[i].multiplicity == b.entries[i].multiplicity);
    }
  }
}

TEST_CASE("support uncertainty inequality") {
  SUBCASE("delta function achieves equality") {
    auto ctx = GroupCtx::make(5);
    auto rep = uncertainty_check(CyclicFn::delta(ctx, 0));
    CHECK(rep.supp_f == 1);
    CHECK(rep.supp_fhat == 5);
    CHECK(rep.holds);
    CHECK(rep.equality);
  }

  SUBCASE("dense random functions are far from equality") {
    auto ctx = GroupCtx::make(11);
    std::mt19937_64 rng(6);
    std::normal_distribution<double> nd(0.0, 1.0);
    CyclicFn f = CyclicFn::zero(ctx);
    for (std::int64_t x = 0; x < 11; ++x) f.set(x, cx(nd(rng), nd(rng)));
    auto rep = uncertainty_check(f);
    CHECK(rep.supp_f == 11);
    CHECK(rep.supp_fhat == 11);
    CHECK(rep.holds);
    CHECK_FALSE(rep.equality);
  }

  SUBCASE("holds for random sparse functions") {
    auto ctx = GroupCtx::make(7);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> size(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
      CyclicFn f = CyclicFn::zero(ctx);
      std::int64_t k = size(rng);
      for (std::int64_t j = 0; j < k; ++j)
        f.set(std::int64_t(rng() % 7), cx(nd(rng), nd(rng)));
      if (f.norm2() == 0.0) continue;
      CHECK(uncertainty_check(f).holds);
    }
  }

  CHECK_THROWS(uncertainty_check(CyclicFn::zero(GroupCtx::make(5))));
}

TEST_CASE("root-of-unity minors never vanish") {
  SUBCASE("2x2 at p=3, pinned") {
    CycInt det = chebotarev_minor(3, {0, 1}, {0, 1});
    // det [[1,1],[1,zeta]] = zeta - 1
    CycInt expect = CycInt::zero(3);
    expect.add_zeta_power(1);
    CycInt one = CycInt::zero(3);
    one.add_zeta_power(0);
    CHECK(det == expect - one);
    CHECK_FALSE(det.is_zero());
  }

  SUBCASE("all pairs of 2-subsets at p=5") {
    std::vector<std::vector<std::int64_t>> subs;
    for (std::int64_t a = 0; a < 5; ++a)
      for (std::int64_t b = a + 1; b < 5; ++b) subs.push_back({a, b});
    for (const auto& A : subs)
      for (const auto& B : subs) CHECK_FALSE(chebotarev_minor(5, A, B).is_zero());
  }

  SUBCASE("exhaustive over all sizes at p=7") {
    std::vector<std::vector<std::vector<std::int64_t>>> by_size(8);
    for (std::int64_t mask = 1; mask < 128; ++mask) {
      std::vector<std::int64_t> s;
      for (std::int64_t j = 0; j < 7; ++j)
        if (mask >> j & 1) s.push_back(j);
      by_size[s.size()].push_back(std::move(s));
    }
    for (std::int64_t k = 1; k <= 7; ++k)
      for (const auto& A : by_size[k])
        for (const auto& B : by_size[k]) CHECK_FALSE(chebotarev_minor(7, A, B).is_zero());
  }

  SUBCASE("sizes up to 3 at p=11 and p=13") {
    for (std::int64_t p : {11, 13}) {
      std::vector<std::vector<std::int64_t>> subs;
      for (std::int64_t a = 0; a < p; ++a)
        for (std::int64_t b = a + 1; b < p; ++b)
          for (std::int64_t c = b + 1; c < p; ++c) subs.push_back({a, b, c});
      for (const auto& A : subs)
        for (const auto& B : subs) CHECK_FALSE(chebotarev_minor(p, A, B).is_zero());
    }
  }

  CHECK_THROWS(chebotarev_minor(5, {0, 1}, {0}));
}

TEST_CASE("biunimodular search recovers the closed-form families") {
  SUBCASE("p=5: every converged point is a gaussian") {
    auto rep = biunimodular_search(5, 500, 99);
    CHECK(rep.converged == 500);
    CHECK(rep.gaussian_found == 20);  // all (p-1)p of them
    CHECK(rep.new_found == 0);
    // the invariant family at p=5 coincides with gaussians
    auto ctx = GroupCtx::make(5);
    for (const auto& h : bjorck_saffari(ctx)) {
      CyclicFn hn = (1.0 / h.at(0)) * h;
      bool is_gauss = false;
      for (std::int64_t m = 1; m < 5 && !is_gauss; ++m)
        for (std::int64_t a = 0; a < 5 && !is_gauss; ++a) {
          CyclicFn g = gaussian(ctx, m, a);
          is_gauss = hn.sup_dist((1.0 / g.at(0)) * g) < 1e-9;
        }
      CHECK(is_gauss);
    }
  }

  SUBCASE("p=7: both families fully recovered, every find certified") {
    auto ctx = GroupCtx::make(7);
    auto rep = biunimodular_search(7, 2000, 99);
    CHECK(rep.gaussian_found == 42);  // all (p-1)p gaussians

    // all 4p = 28 plain translates of the invariant family are among the hits
    std::int64_t translates_found = 0;
    for (const auto& h0 : bjorck_saffari(ctx)) {
      for (std::int64_t a = 0; a < 7; ++a) {
        CyclicFn ha = CyclicFn::zero(ctx);
        for (std::int64_t x = 0; x < 7; ++x) ha.set(x, h0.at(x - a));
        ha = (1.0 / ha.at(0)) * ha;
        for (const auto& hit : rep.functions)
          if (hit.f.sup_dist(ha) < 1e-6) {
            ++translates_found;
            CHECK(hit.tag != "new");
            break;
          }
      }
    }
    CHECK(translates_found == 28);

    // independent certification of everything reported, NEW included
    std::int64_t new_seen = 0;
    for (const auto& hit : rep.functions) {
      CHECK(is_biunimodular(hit.f, false, 1e-8));
      CHECK(hit.residual < 1e-10);
      if (hit.tag == "new") ++new_seen;
    }
    CHECK(new_seen == rep.new_found);
  }

  SUBCASE("p=11: search reaches both families and genuinely new points") {
    auto rep = biunimodular_search(11, 3000, 99);
    CHECK(rep.gaussian_found > 0);
    CHECK(rep.bs_translate_found > 0);
    CHECK(rep.new_found > 0);
    for (const auto& hit : rep.functions) CHECK(is_biunimodular(hit.f, false, 1e-8));
  }
}
