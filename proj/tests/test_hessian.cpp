#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "cfn/continuation.hpp"
#include "cfn/hessian.hpp"
#include "doctest.h"

using namespace cfn;

namespace {

CVec random_coords(std::int64_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CVec z(m);
  for (std::int64_t i = 0; i < m; ++i) z(i) = cx(nd(rng), nd(rng));
  return z;
}

}  // namespace

TEST_CASE("path tracking on known polynomial systems") {
  SUBCASE("one quadratic") {
    auto F = [](const CVec& z) -> CVec {
      CVec r(1);
      r(0) = z(0) * z(0) - 4.0;
      return r;
    };
    auto J = [](const CVec& z) -> CMat {
      CMat m(1, 1);
      m(0, 0) = 2.0 * z(0);
      return m;
    };
    auto res = total_degree_solve(1, 2, F, J, 11);
    REQUIRE(res.endpoints.size() == 2);
    auto cl = cluster_points(res.endpoints, 1e-6);
    REQUIRE(cl.size() == 2);
    for (const auto& c : cl) CHECK(std::abs(std::abs(c.point(0)) - 2.0) < 1e-10);
  }

  SUBCASE("coupled quadratics with four regular roots") {
    // x^2 - 1 = 0, y^2 - x = 0: roots (1, +-1), (-1, +-i)
    auto F = [](const CVec& z) -> CVec {
      CVec r(2);
      r(0) = z(0) * z(0) - 1.0;
      r(1) = z(1) * z(1) - z(0);
      return r;
    };
    auto J = [](const CVec& z) -> CMat {
      CMat m = CMat::Zero(2, 2);
      m(0, 0) = 2.0 * z(0);
      m(1, 0) = -1.0;
      m(1, 1) = 2.0 * z(1);
      return m;
    };
    auto res = total_degree_solve(2, 2, F, J, 17);
    CHECK(res.failures == 0);
    auto cl = cluster_points(res.endpoints, 1e-6);
    REQUIRE(cl.size() == 4);
    for (const auto& c : cl) CHECK(F(c.point).norm() < 1e-10);
  }
}

TEST_CASE("the perturbation chart at the Legendre point") {
  auto ch = LegendreChart::make(7);
  CHECK(ch.m == 2);
  CHECK(LegendreChart::make(11).m == 4);
  CHECK_THROWS(LegendreChart::make(13));  // 13 = 1 (mod 4)

  std::mt19937_64 rng(3);
  CVec z = random_coords(ch.m, rng);
  CyclicFn beta = ch.from_coords(z);
  CHECK(ch.in_space(beta));
  CHECK((ch.to_coords(beta) - z).norm() < 1e-14);
  // membership really requires zero mean
  CyclicFn bad = beta;
  bad.set(1, bad.at(1) + 0.1);
  CHECK_FALSE(ch.in_space(bad));
}

TEST_CASE("quadratic part of the defect map") {
  auto ch = LegendreChart::make(7);
  std::mt19937_64 rng(4);
  CVec z = random_coords(ch.m, rng);
  CyclicFn beta = ch.from_coords(z);

  SUBCASE("closure, homogeneity and the sign flip") {
    CHECK(hessian_quadratic(ch, CyclicFn::zero(ch.ctx)).norm2() == 0.0);
    CyclicFn qb = hessian_quadratic(ch, beta);
    CHECK(ch.in_space(qb, 1e-8));
    cx lam(0.7, -1.3);
    CHECK(hessian_quadratic(ch, lam * beta).sup_dist(lam * lam * qb) < 1e-10);
    CHECK(hessian_quadratic(ch, cx(0, 1) * beta).sup_dist(cx(-1, 0) * qb) < 1e-10);
  }

  SUBCASE("tensor form agrees with the convolution form") {
    for (std::int64_t p : {7, 11}) {
      auto chp = LegendreChart::make(p);
      auto q = QuadraticMap::make(chp);
      CVec v = random_coords(chp.m, rng);
      CVec direct = chp.to_coords(hessian_quadratic(chp, chp.from_coords(v)));
      CHECK((q.eval(v) - direct).norm() < 1e-10);
      // jacobian columns against central differences
      CMat jac = q.jacobian(v);
      for (std::int64_t k = 0; k < chp.m; ++k) {
        CVec e = CVec::Zero(chp.m);
        e(k) = 1e-6;
        CVec fd = (q.eval(v + e) - q.eval(v - e)) / 2e-6;
        CHECK((jac.col(k) - fd).norm() < 1e-6);
      }
    }
  }
}

TEST_CASE("full defect map vanishes to second order") {
  for (std::int64_t p : {7, 11}) {
    auto ch = LegendreChart::make(p);
    CHECK(legendre_defect(ch, CyclicFn::zero(ch.ctx)).norm2() == 0.0);

    // finite-difference differential at 0 has norm < 1e-6
    double h = 1e-4, dnorm = 0;
    for (std::int64_t k = 0; k < ch.m; ++k) {
      CVec e = CVec::Zero(ch.m);
      e(k) = h;
      CyclicFn col = legendre_defect(ch, ch.from_coords(e)) -
                     legendre_defect(ch, ch.from_coords(-e));
      dnorm = std::max(dnorm, (1.0 / (2 * h)) * col.norm2());
    }
    CHECK(dnorm < 1e-6);

    // Psi0(eps beta) - eps^2 Q(beta) = o(eps^2)
    std::mt19937_64 rng(5);
    CyclicFn beta = ch.from_coords(random_coords(ch.m, rng).normalized());
    CyclicFn q = hessian_quadratic(ch, beta);
    for (double eps : {1e-2, 1e-3}) {
      CyclicFn diff = legendre_defect(ch, eps * beta) - (eps * eps) * q;
      CHECK(diff.norm2() < 20.0 * eps * eps * eps);
    }
    // W0 closure of the full map at a finite point
    CHECK(ch.in_space(legendre_defect(ch, beta), 1e-8));
  }
}

TEST_CASE("anisotropy evidence") {
  SUBCASE("p=7") {
    auto cert = certify_anisotropy(7, 300, 42);
    CHECK(cert.dim == 2);
    CHECK(cert.min_norm_on_sphere > 0.01);
    CHECK(cert.fiber_count == 4);
    CHECK(cert.expected_fiber == 4);
    CHECK(cert.dichotomy_ok);
  }
  SUBCASE("p=11") {
    auto cert = certify_anisotropy(11, 60, 43);
    CHECK(cert.dim == 4);
    CHECK(cert.min_norm_on_sphere > 1e-3);
    CHECK(cert.fiber_count == 16);
    CHECK(cert.dichotomy_ok);
  }
}

TEST_CASE("perturbing the transform splits the multiple point") {
  auto rep = perturbation_split(7, 7);
  CHECK(rep.w0_regular);
  REQUIRE(rep.real_count_plus.size() == rep.t_ladder.size());
  for (std::size_t i = 0; i < rep.t_ladder.size(); ++i) {
    CHECK(rep.real_count_plus[i] <= 4);
    CHECK(rep.real_count_minus[i] <= 4);
    CHECK(std::min(rep.real_count_plus[i], rep.real_count_minus[i]) <= 2);
  }
  CHECK(rep.split_observed);
}
