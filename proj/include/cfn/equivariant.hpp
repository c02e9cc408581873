#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfn/group.hpp"

namespace cfn {

/// A proper subgroup H of F_p^* of index n together with a non-trivial
/// character c of H, stored as an exponent on the generator g0^n.
struct SubgroupChar {
  GroupCtx ctx;
  std::int64_t n = 0;           // index of H, n >= 2, n | p-1
  std::int64_t d_H = 0;         // order of H, (p-1)/n
  std::int64_t c_exponent = 0;  // c(g0^n) = zeta_{d_H}^{c_exponent}, != 0 mod d_H

  static SubgroupChar make(const GroupCtx& ctx, std::int64_t n, std::int64_t c_exponent);

  std::vector<std::int64_t> elements() const;  // H as residues
  std::int64_t d_c() const;                    // order of c
  bool contains_minus_one() const { return d_H % 2 == 0; }
  bool c_odd() const;        // c(-1) = -1 (requires -1 in H)
  cx c_eval(std::int64_t j) const;  // c(g0^{n j})
};

/// The n-dimensional space of (H,c)-equivariant functions with its coset
/// basis f_i(g_j) = delta_{ij} and the n Dirichlet characters it contains.
struct EquivariantSpace {
  SubgroupChar base;
  std::vector<std::int64_t> coset_reps;        // g_j = g0^{j-1}, j = 1..n
  std::vector<CyclicFn> basis;                 // f_1, ..., f_n
  std::vector<DirichletChar> character_members;

  static EquivariantSpace make(const SubgroupChar& base);

  bool contains(const CyclicFn& f, double tol = 1e-10) const;
  std::vector<cx> coordinates(const CyclicFn& f) const;  // lambda_i = f(g_i)
};

struct TransversalityReport {
  std::string point_label;
  bool criterion_verdict = false;
  bool numeric_verdict = false;
  std::vector<std::int64_t> offending_psi_exponents;  // exponents t with psi = omega^t
  std::int64_t tangent_intersection_dim = 0;          // excess over the trivial 2 real dims
};

/// Exact Jacobi-sum test: transverse at [chi] iff J(chi,psi) != psi(-1) J(conj chi,psi)
/// for every non-trivial psi trivial on H.
TransversalityReport criterion_transversal_at(const DirichletChar& chi,
                                              const EquivariantSpace& space);

/// Tangent-rank test for a torus point: f lies on {|f| constant on S} with
/// S = F_p^* (punctured) or F_p, V = span(basis), and the transform is dft.
/// Assembles the real equations cutting both tangent cones and reports the
/// kernel dimension; the scaling directions f, if always lie in the kernel,
/// so transversality is kernel dimension exactly 2.
TransversalityReport numeric_transversal_at(const CyclicFn& f,
                                            const std::vector<CyclicFn>& basis,
                                            bool punctured,
                                            double rank_tol = 1e-8);

/// Both verdicts for a character point of an equivariant space.
TransversalityReport transversal_at(const DirichletChar& chi,
                                    const EquivariantSpace& space,
                                    double rank_tol = 1e-8);

/// Exception patterns (d_c, n) under which character points may fail to be
/// transverse; 0 = none, 1..4 = which pattern.
int character_exception_case(std::int64_t d_c, std::int64_t n);

struct SetupChoice {
  std::int64_t p = 0;
  bool safe_prime = false;
  // valid when !safe_prime:
  std::int64_t n = 0;
  std::int64_t c_exponent = 0;
  std::int64_t d_c = 0;
};

/// Choose (H, c) with all character points transverse, or flag a safe prime.
SetupChoice classify_setup(std::int64_t p);

}  // namespace cfn
