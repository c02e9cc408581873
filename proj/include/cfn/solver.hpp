#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfn/continuation.hpp"
#include "cfn/cycint.hpp"
#include "cfn/equivariant.hpp"
#include "cfn/group.hpp"

namespace cfn {

/// Square coordinate system for counting odd functions with f(1) = 1 that
/// multiply to 1 off 0 together with a partner g, both in values and in
/// frequencies. Unknowns z = (f(2..n), g(2..n)), n = (d-1)/2; equations are
/// fg(x) = t0(x) for x = 2..n and (fhat ghat)(k) = t1(k) for k = 1..n-1;
/// the k = n equation is implied by Parseval when the target satisfies the
/// matching sum constraint, so it is dropped.
struct OddSystem {
  GroupCtx ctx;
  std::int64_t n = 0;    // (d-1)/2
  std::int64_t dim = 0;  // 2n-2
  CMat S;                // n x n, S(k-1,x-1) = 2 i sin(2 pi k x/d)/sqrt(d)

  static OddSystem make(std::int64_t d);

  CyclicFn f_of(const CVec& z) const;
  CyclicFn g_of(const CVec& z) const;
  CVec pack(const CyclicFn& f, const CyclicFn& g) const;

  // target layout: [t0(2..n), t1(1..n-1)]
  CVec target_point() const;    // the counting fiber: t0 = 1, t1 = -1
  CVec target_start() const;    // the split fiber: t0 = 1_H, t1 = -1_H
  CVec residual(const CVec& z, const CVec& target) const;
  CMat jacobian(const CVec& z) const;
};

/// One start solution over the split fiber, with its orbit-index sets.
struct StartPair {
  CyclicFn f, g;
  std::vector<std::int64_t> A_orbits, B_orbits;  // coset exponents, 0 = H
};

/// All start solutions for an equivariant space whose subgroup contains -1:
/// kernel vectors of the frequency-restriction maps over all admissible
/// support pairs; the count is C(2n-2, n-1).
std::vector<StartPair> start_fiber(const EquivariantSpace& space);

struct SolutionTags {
  bool is_dirichlet = false;
  std::int64_t dirichlet_exponent = -1;
  bool is_unimodular = false;
  bool is_real_valued = false;
};

struct SolutionEntry {
  CyclicFn f, g;
  double residual = 0.0;
  std::int64_t multiplicity = 0;
  SolutionTags tags;
};

struct SolutionSet {
  std::int64_t d = 0;
  std::int64_t total_paths = 0;
  std::int64_t diverged = 0;
  std::vector<SolutionEntry> entries;

  std::int64_t total_multiplicity() const;
  std::int64_t unimodular_multiplicity() const;
  std::int64_t dirichlet_count() const;
  std::int64_t real_valued_count() const;
};

enum class SolveMethod { lemma68_start, total_degree };

struct SolveOptions {
  double cluster_radius = 1e-4;
  double newton_tol = 1e-12;
  double residual_tol = 1e-8;  // acceptance threshold on reported entries
};

/// Count and classify all odd functions with f(1) = 1 satisfying the
/// autocorrelation predicate on C_d, d odd.
SolutionSet solve_odd_cfunctions(std::int64_t d, SolveMethod method,
                                 std::uint64_t seed,
                                 const SolveOptions& opts = {});

struct UncertaintyReport {
  std::int64_t supp_f = 0;
  std::int64_t supp_fhat = 0;
  bool holds = false;     // supp f + supp fhat >= p+1
  bool equality = false;  // == p+1
};
UncertaintyReport uncertainty_check(const CyclicFn& f, double tol = 1e-10);

/// Exact minor det(zeta_p^{jk}), j in A, k in B; nonzero for every pair.
CycInt chebotarev_minor(std::int64_t p, const std::vector<std::int64_t>& A,
                        const std::vector<std::int64_t>& B);

struct BiunimodularHit {
  CyclicFn f;  // canonicalized with f(0) = 1
  double residual = 0.0;
  std::string tag;  // "gaussian", "bs-translate", "new"
  std::int64_t hits = 0;
};

struct BiunimodularReport {
  std::int64_t p = 0;
  std::int64_t trials = 0;
  std::int64_t converged = 0;
  std::vector<BiunimodularHit> functions;
  std::int64_t gaussian_found = 0;     // distinct
  std::int64_t bs_translate_found = 0;
  std::int64_t new_found = 0;
};

/// Random-start Newton search on the phase torus for functions that are
/// unimodular together with their transform; converged points are matched
/// against the closed-form families (gaussians; the invariant two- and
/// four-term family with its translates and modulations).
BiunimodularReport biunimodular_search(std::int64_t p, std::int64_t trials,
                                       std::uint64_t seed);

}  // namespace cfn
