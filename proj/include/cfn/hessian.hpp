#pragma once

#include <cstdint>
#include <vector>

#include "cfn/continuation.hpp"
#include "cfn/group.hpp"

namespace cfn {

/// Chart around the Legendre point for p = 3 (mod 4): perturbations beta that
/// are even with beta(0) = 0 and zero mean, a space of complex dimension
/// (p-3)/2 with coordinates z_j = beta(j), j = 1..(p-3)/2.
struct LegendreChart {
  GroupCtx ctx;
  CyclicFn chi0;
  std::int64_t m = 0;  // (p-3)/2

  static LegendreChart make(std::int64_t p);

  CyclicFn from_coords(const CVec& z) const;
  CVec to_coords(const CyclicFn& beta) const;
  bool in_space(const CyclicFn& beta, double tol = 1e-9) const;
};

/// Q(beta) = chi0 beta * chi0 beta - chi0 * (chi0 beta^2); maps the chart
/// space to itself, Q(i beta) = -Q(beta), homogeneous of degree 2.
CyclicFn hessian_quadratic(const LegendreChart& ch, const CyclicFn& beta);

/// Psi0(beta) = chi0 e^{i beta} * chi0 e^{-i beta} - chi0 * chi0; vanishes to
/// second order at 0 with Hessian Q.
CyclicFn legendre_defect(const LegendreChart& ch, const CyclicFn& beta);

/// Q in chart coordinates, with its exact bilinear tensor.
struct QuadraticMap {
  std::int64_t m = 0;
  std::vector<CVec> tensor;  // B(e_i, e_j) stacked row-major, i <= j symmetric

  static QuadraticMap make(const LegendreChart& ch);
  CVec eval(const CVec& z) const;
  CMat jacobian(const CVec& z) const;
};

struct AnisotropyCertificate {
  std::int64_t p = 0;
  std::int64_t dim = 0;              // (p-3)/2
  std::int64_t trials = 0;
  double min_norm_on_sphere = 0.0;   // smallest |Q| found with |z| = 1
  std::int64_t fiber_count = 0;      // regular solutions of Q(z) = w, w random
  std::int64_t expected_fiber = 0;   // 2^dim
  std::int64_t real_plus = 0;        // real solutions of Q(z) = w, w real
  std::int64_t real_minus = 0;       // real solutions of Q(z) = -w
  bool dichotomy_ok = false;         // min(real counts) <= 2^{dim-1}
};
AnisotropyCertificate certify_anisotropy(std::int64_t p, std::int64_t trials,
                                         std::uint64_t seed);

struct PerturbationReport {
  std::int64_t p = 0;
  std::int64_t dim = 0;
  bool w0_regular = false;
  std::int64_t resamples = 0;
  std::vector<double> t_ladder;
  std::vector<std::int64_t> real_count_plus;   // solutions of Psi_t = 0 near 0
  std::vector<std::int64_t> real_count_minus;  // same for -t
  bool split_observed = false;  // each rung: one sign has <= 2^{dim-1} real pts
};
PerturbationReport perturbation_split(std::int64_t p, std::uint64_t seed);

}  // namespace cfn
