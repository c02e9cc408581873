#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "cfn/cycint.hpp"
#include "cfn/equivariant.hpp"
#include "doctest.h"

using namespace cfn;

namespace {

std::vector<CyclicFn> full_basis(const GroupCtx& ctx) {
  std::vector<CyclicFn> b;
  for (std::int64_t x = 0; x < ctx.d; ++x) b.push_back(CyclicFn::delta(ctx, x));
  return b;
}

}  // namespace

TEST_CASE("subgroup characters and equivariant spaces") {
  auto c11 = GroupCtx::make(11);
  auto sc = SubgroupChar::make(c11, 5, 1);  // H = {+-1}, c the sign character

  SUBCASE("structure of H and c") {
    CHECK(sc.d_H == 2);
    auto h = sc.elements();
    REQUIRE(h.size() == 2);
    CHECK(h[0] == 1);
    CHECK(h[1] == 10);
    CHECK(sc.d_c() == 2);
    CHECK(sc.contains_minus_one());
    CHECK(sc.c_odd());
  }

  SUBCASE("basis, members and the sup-norm identity") {
    auto sp = EquivariantSpace::make(sc);
    REQUIRE(sp.basis.size() == 5);
    REQUIRE(sp.character_members.size() == 5);
    for (const auto& f : sp.basis) CHECK(std::abs(f.at(0)) == 0.0);

    // equivariance f(hx) = c(h) f(x) for h = -1
    for (const auto& f : sp.basis)
      for (std::int64_t x = 1; x < 11; ++x)
        CHECK(std::abs(f.at(-x) + f.at(x)) < 1e-12);

    // the members are exactly the characters extending c (odd exponent here)
    for (const auto& chi : sp.character_members) {
      CHECK(chi.t % 2 == 1);
      CHECK(sp.contains(chi.fn()));
    }

    // sup-norm identity for a combination
    CyclicFn f = cx(0.3, 1.0) * sp.basis[0] + cx(-2.0, 0.1) * sp.basis[3];
    double sup = 0;
    for (std::int64_t x = 0; x < 11; ++x) sup = std::max(sup, std::abs(f.at(x)));
    auto lam = sp.coordinates(f);
    double lsup = 0;
    for (cx l : lam) lsup = std::max(lsup, std::abs(l));
    CHECK(sup == doctest::Approx(lsup).epsilon(1e-12));
  }

  SUBCASE("dft maps the space to the conjugate-character space") {
    auto sp = EquivariantSpace::make(sc);
    auto sp_conj = EquivariantSpace::make(SubgroupChar::make(c11, 5, sc.d_H - sc.c_exponent));
    for (const auto& f : sp.basis) CHECK(sp_conj.contains(dft(f), 1e-9));
  }
}

TEST_CASE("transversality criterion at character points") {
  SUBCASE("p=11, H={+-1}: Legendre fails, omega passes") {
    auto c11 = GroupCtx::make(11);
    auto sp = EquivariantSpace::make(SubgroupChar::make(c11, 5, 1));
    auto bad = criterion_transversal_at(DirichletChar(c11, 5), sp);  // chi0
    CHECK_FALSE(bad.criterion_verdict);
    CHECK_FALSE(bad.offending_psi_exponents.empty());
    auto good = criterion_transversal_at(DirichletChar(c11, 1), sp);
    CHECK(good.criterion_verdict);
  }

  SUBCASE("p=13, n=3, c of order 4: every extension is transverse") {
    auto c13 = GroupCtx::make(13);
    for (std::int64_t ce : {1, 3}) {
      auto sp = EquivariantSpace::make(SubgroupChar::make(c13, 3, ce));
      CHECK(sp.base.d_c() == 4);
      for (const auto& chi : sp.character_members)
        CHECK(criterion_transversal_at(chi, sp).criterion_verdict);
    }
  }
}

TEST_CASE("criterion equals tangent rank for p <= 13") {
  for (std::int64_t p : {5, 7, 11, 13}) {
    auto ctx = GroupCtx::make(p);
    for (std::int64_t n = 2; n < p - 1; ++n) {
      if ((p - 1) % n != 0) continue;
      std::int64_t d_H = (p - 1) / n;
      for (std::int64_t ce = 1; ce < d_H; ++ce) {
        auto sp = EquivariantSpace::make(SubgroupChar::make(ctx, n, ce));
        for (const auto& chi : sp.character_members) {
          auto rep = transversal_at(chi, sp);
          CHECK(rep.criterion_verdict == rep.numeric_verdict);
        }
      }
    }
  }
}

TEST_CASE("tangent coefficients match the Gauss-sum ratio") {
  // the transform acts on the character basis by alpha_psi = G(chi psi)/G(chi),
  // which also equals G(psi)/J(chi, psi)
  for (std::int64_t p : {7, 13}) {
    auto ctx = GroupCtx::make(p);
    for (std::int64_t t = 1; t < p - 1; ++t)
      for (std::int64_t s = 1; s < p - 1; ++s) {
        if ((t + s) % (p - 1) == 0) continue;
        DirichletChar chi(ctx, t), psi(ctx, s);
        cx lhs = gauss_sum_exact(chi.times(psi)).embed() / gauss_sum_exact(chi).embed();
        cx rhs = gauss_sum_exact(psi).embed() / jacobi_sum_exact(chi, psi).embed();
        CHECK(std::abs(lhs - rhs) < 1e-9);
      }
  }
}

TEST_CASE("tangent rank at the unpunctured torus points") {
  SUBCASE("gaussian points are transverse") {
    for (std::int64_t p : {3, 5, 7, 11, 13}) {
      auto ctx = GroupCtx::make(p);
      auto rep = numeric_transversal_at(gaussian(ctx, 1, 0), full_basis(ctx), false);
      CHECK(rep.numeric_verdict);
    }
  }
  SUBCASE("two- and four-term family points are transverse") {
    for (std::int64_t p : {5, 7, 11, 13}) {
      auto ctx = GroupCtx::make(p);
      for (const auto& h : bjorck_saffari(ctx)) {
        auto rep = numeric_transversal_at(h, full_basis(ctx), false);
        CHECK(rep.numeric_verdict);
      }
    }
  }
  SUBCASE("Legendre point on the odd space of F_7 is degenerate") {
    auto c7 = GroupCtx::make(7);
    auto sp = EquivariantSpace::make(SubgroupChar::make(c7, 3, 1));  // H = {+-1}
    auto rep = transversal_at(DirichletChar(c7, 3), sp);
    CHECK_FALSE(rep.numeric_verdict);
    CHECK(rep.tangent_intersection_dim >= 1);
    CHECK_FALSE(rep.criterion_verdict);
  }
}

TEST_CASE("setup selection") {
  auto s13 = classify_setup(13);
  CHECK_FALSE(s13.safe_prime);
  CHECK(s13.n == 3);
  CHECK(s13.d_c == 4);

  auto s17 = classify_setup(17);
  CHECK_FALSE(s17.safe_prime);
  CHECK(s17.n == 4);
  CHECK(s17.d_c == 4);

  CHECK(classify_setup(11).safe_prime);
  CHECK(classify_setup(23).safe_prime);
  CHECK_FALSE(classify_setup(29).safe_prime);
  CHECK(classify_setup(29).n == 7);
}
