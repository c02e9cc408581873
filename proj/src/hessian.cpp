#include "cfn/hessian.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace cfn {

LegendreChart LegendreChart::make(std::int64_t p) {
  if (!is_prime_int(p) || p % 4 != 3 || p < 7)
    throw std::invalid_argument("LegendreChart: prime p = 3 (mod 4), p >= 7 required");
  LegendreChart ch;
  ch.ctx = GroupCtx::make(p);
  ch.chi0 = legendre_char(ch.ctx).fn();
  ch.m = (p - 3) / 2;
  return ch;
}

CyclicFn LegendreChart::from_coords(const CVec& z) const {
  CyclicFn beta = CyclicFn::zero(ctx);
  cx tail = 0;
  for (std::int64_t j = 0; j < m; ++j) {
    beta.set(j + 1, z(j));
    beta.set(-(j + 1), z(j));
    tail -= z(j);
  }
  beta.set(m + 1, tail);  // m+1 = (p-1)/2, its own negative's pair
  beta.set(-(m + 1), tail);
  return beta;
}

CVec LegendreChart::to_coords(const CyclicFn& beta) const {
  CVec z(m);
  for (std::int64_t j = 0; j < m; ++j) z(j) = beta.at(j + 1);
  return z;
}

bool LegendreChart::in_space(const CyclicFn& beta, double tol) const {
  if (std::abs(beta.at(0)) > tol) return false;
  cx sum = 0;
  for (std::int64_t x = 0; x < ctx.d; ++x) {
    sum += beta.at(x);
    if (std::abs(beta.at(x) - beta.at(-x)) > tol) return false;
  }
  return std::abs(sum) <= tol * ctx.d;
}

CyclicFn hessian_quadratic(const LegendreChart& ch, const CyclicFn& beta) {
  if (!ch.in_space(beta)) throw std::invalid_argument("hessian_quadratic: beta outside the chart space");
  CyclicFn a = pointwise(ch.chi0, beta);
  return convolve(a, a) - convolve(ch.chi0, pointwise(ch.chi0, pointwise(beta, beta)));
}

CyclicFn legendre_defect(const LegendreChart& ch, const CyclicFn& beta) {
  if (!ch.in_space(beta)) throw std::invalid_argument("legendre_defect: beta outside the chart space");
  const std::int64_t p = ch.ctx.d;
  CyclicFn f = CyclicFn::zero(ch.ctx), g = CyclicFn::zero(ch.ctx);
  for (std::int64_t x = 0; x < p; ++x) {
    cx e = std::exp(cx(0, 1) * beta.at(x));
    f.set(x, ch.chi0.at(x) * e);
    g.set(x, ch.chi0.at(x) / e);
  }
  return convolve(f, g) - convolve(ch.chi0, ch.chi0);
}

QuadraticMap QuadraticMap::make(const LegendreChart& ch) {
  QuadraticMap q;
  q.m = ch.m;
  std::vector<CVec> qe(ch.m);  // Q(e_i)
  for (std::int64_t i = 0; i < ch.m; ++i) {
    CVec e = CVec::Zero(ch.m);
    e(i) = 1;
    qe[i] = ch.to_coords(hessian_quadratic(ch, ch.from_coords(e)));
  }
  q.tensor.resize(ch.m * ch.m);
  for (std::int64_t i = 0; i < ch.m; ++i)
    for (std::int64_t j = i; j < ch.m; ++j) {
      CVec b;
      if (i == j) {
        b = qe[i];
      } else {
        CVec e = CVec::Zero(ch.m);
        e(i) = 1;
        e(j) = 1;
        CVec qs = ch.to_coords(hessian_quadratic(ch, ch.from_coords(e)));
        b = 0.5 * (qs - qe[i] - qe[j]);  // polarization B(e_i, e_j)
      }
      q.tensor[i * ch.m + j] = b;
      q.tensor[j * ch.m + i] = b;
    }
  return q;
}

CVec QuadraticMap::eval(const CVec& z) const {
  CVec out = CVec::Zero(m);
  for (std::int64_t i = 0; i < m; ++i)
    for (std::int64_t j = 0; j < m; ++j)
      out += z(i) * z(j) * tensor[i * m + j];
  return out;
}

CMat QuadraticMap::jacobian(const CVec& z) const {
  CMat jac(m, m);
  for (std::int64_t k = 0; k < m; ++k) {
    CVec col = CVec::Zero(m);
    for (std::int64_t j = 0; j < m; ++j) col += 2.0 * z(j) * tensor[k * m + j];
    jac.col(k) = col;
  }
  return jac;
}

namespace {

// regular distinct roots among refined endpoints
std::vector<CVec> regular_roots(const QuadraticMap& q, const CVec& w,
                                const TotalDegreeResult& td) {
  std::vector<CVec> keep;
  for (const auto& z : td.endpoints) {
    if ((q.eval(z) - w).norm() > 1e-8) continue;
    Eigen::JacobiSVD<CMat> svd(q.jacobian(z));
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > 1e-8 * std::max(1.0, sv(0))) keep.push_back(z);
  }
  std::vector<CVec> out;
  for (const auto& c : cluster_points(keep, 1e-6)) out.push_back(c.point);
  return out;
}

std::vector<CVec> solve_fiber(const QuadraticMap& q, const CVec& w,
                              std::uint64_t seed) {
  auto F = [&](const CVec& z) -> CVec { return q.eval(z) - w; };
  auto J = [&](const CVec& z) -> CMat { return q.jacobian(z); };
  return regular_roots(q, w, total_degree_solve(q.m, 2, F, J, seed));
}

std::int64_t count_real(const std::vector<CVec>& pts) {
  std::int64_t n = 0;
  for (const auto& z : pts)
    if (z.imag().norm() <= 1e-6 * (1.0 + z.norm())) ++n;
  return n;
}

}  // namespace

AnisotropyCertificate certify_anisotropy(std::int64_t p, std::int64_t trials,
                                         std::uint64_t seed) {
  auto ch = LegendreChart::make(p);
  auto q = QuadraticMap::make(ch);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);

  AnisotropyCertificate cert;
  cert.p = p;
  cert.dim = ch.m;
  cert.trials = trials;
  cert.expected_fiber = std::int64_t(1) << ch.m;

  // multi-start descent of |Q| on the unit sphere
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t tr = 0; tr < trials; ++tr) {
    CVec z(ch.m);
    for (std::int64_t i = 0; i < ch.m; ++i) z(i) = cx(nd(rng), nd(rng));
    z.normalize();
    double val = q.eval(z).norm();
    for (int it = 0; it < 60; ++it) {
      CVec grad = q.jacobian(z).adjoint() * q.eval(z);
      double eta = 0.5;
      bool moved = false;
      for (int bt = 0; bt < 20 && !moved; ++bt, eta *= 0.5) {
        CVec zn = (z - eta * grad).normalized();
        double vn = q.eval(zn).norm();
        if (vn < val) {
          z = std::move(zn);
          val = vn;
          moved = true;
        }
      }
      if (!moved) break;
    }
    best = std::min(best, val);
  }
  cert.min_norm_on_sphere = best;

  // regular fiber over a random complex target
  CVec w(ch.m);
  for (std::int64_t i = 0; i < ch.m; ++i) w(i) = cx(nd(rng), nd(rng));
  w.normalize();
  cert.fiber_count = std::int64_t(solve_fiber(q, w, rng()).size());

  // real-count dichotomy over a real target
  CVec wr(ch.m);
  for (std::int64_t i = 0; i < ch.m; ++i) wr(i) = nd(rng);
  wr.normalize();
  cert.real_plus = count_real(solve_fiber(q, wr, rng()));
  cert.real_minus = count_real(solve_fiber(q, -wr, rng()));
  cert.dichotomy_ok =
      std::min(cert.real_plus, cert.real_minus) <= (std::int64_t(1) << (ch.m - 1));
  return cert;
}

namespace {

// odd functions as vectors of values at 1..n, f(-k) = -f(k)
CVec odd_coords(const CyclicFn& f, std::int64_t n) {
  CVec u(n);
  for (std::int64_t k = 1; k <= n; ++k) u(k - 1) = f.at(k);
  return u;
}

CyclicFn odd_fn(const GroupCtx& ctx, const CVec& u) {
  CyclicFn f = CyclicFn::zero(ctx);
  for (std::int64_t k = 1; k <= u.size(); ++k) {
    f.set(k, u(k - 1));
    f.set(-k, -u(k - 1));
  }
  return f;
}

// Psi_t(beta) = e^{tX0}(chi0 e^{i beta}) * e^{tX0}(chi0 e^{-i beta}) - chi0*chi0
CVec defect_perturbed_coords(const LegendreChart& ch, const Eigen::MatrixXd& E,
                             const CVec& beta_coords) {
  const std::int64_t p = ch.ctx.d, n = (p - 1) / 2;
  CyclicFn beta = ch.from_coords(beta_coords);
  CVec uf(n), ug(n);
  for (std::int64_t k = 1; k <= n; ++k) {
    cx e = std::exp(cx(0, 1) * beta.at(k));
    uf(k - 1) = ch.chi0.at(k) * e;
    ug(k - 1) = ch.chi0.at(k) / e;
  }
  CyclicFn f = odd_fn(ch.ctx, E * uf), g = odd_fn(ch.ctx, E * ug);
  return ch.to_coords(convolve(f, g) - convolve(ch.chi0, ch.chi0));
}

}  // namespace

PerturbationReport perturbation_split(std::int64_t p, std::uint64_t seed) {
  auto ch = LegendreChart::make(p);
  auto q = QuadraticMap::make(ch);
  const std::int64_t n = (p - 1) / 2;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);

  PerturbationReport rep;
  rep.p = p;
  rep.dim = ch.m;

  Eigen::MatrixXd X0(n, n);
  CVec w0;
  std::vector<CVec> fiber_plus, fiber_minus;
  for (rep.resamples = 0; rep.resamples < 6; ++rep.resamples) {
    Eigen::MatrixXd A(n, n);
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t j = 0; j < n; ++j) A(i, j) = nd(rng);
    X0 = 0.5 * (A - A.transpose());
    // w0 = -2 X0(chi0) * chi0, the first-order term of the deformation
    CVec u = odd_coords(ch.chi0, n);
    CyclicFn w0fn = cx(-2, 0) * convolve(odd_fn(ch.ctx, X0 * u), ch.chi0);
    if (!ch.in_space(w0fn)) throw std::logic_error("perturbation_split: w0 left the chart space");
    w0 = ch.to_coords(w0fn);

    fiber_plus = solve_fiber(q, w0, rng());
    fiber_minus = solve_fiber(q, -w0, rng());
    rep.w0_regular = std::int64_t(fiber_plus.size()) == (std::int64_t(1) << ch.m) &&
                     std::int64_t(fiber_minus.size()) == (std::int64_t(1) << ch.m);
    if (rep.w0_regular) break;
  }
  if (!rep.w0_regular) return rep;

  // rescaled family: Phi_s(v) = Psi_{sign s^2}(s v)/s^2, which at s=0 equals
  // Q(v) -+ w0; track its zeros from the known s=0 fibers
  auto track_rungs = [&](int sign, const std::vector<CVec>& start_fiber,
                         double t) -> std::int64_t {
    const double s_end = std::sqrt(t);
    // evaluating Psi(s v)/s^2 amplifies rounding noise by 1/s^2, so the track
    // starts at a small positive sigma with Newton-corrected start points
    const double sig0 = 1e-2;
    Homotopy h;
    h.dim = ch.m;
    h.F = [&, sign](const CVec& v, double tau) -> CVec {
      double s = (sig0 + (1.0 - sig0) * tau) * s_end;
      Eigen::MatrixXd E = (sign * s * s * X0).exp();
      return defect_perturbed_coords(ch, E, s * v) / (s * s);
    };
    h.J = [&](const CVec& v, double sig) -> CMat {
      CMat jac(ch.m, ch.m);
      const double fd = 1e-6;
      CVec base = h.F(v, sig);
      for (std::int64_t k = 0; k < ch.m; ++k) {
        CVec vp = v;
        vp(k) += fd;
        jac.col(k) = (h.F(vp, sig) - base) / fd;
      }
      return jac;
    };
    TrackOptions opts;
    opts.newton_tol = 1e-10;
    std::vector<CVec> ends;
    for (CVec v0 : start_fiber) {
      if (!newton_refine(h, v0, 0.0, 1e-9, 30)) continue;
      PathPoint e = track_path(h, v0, opts);
      if (e.ok) ends.push_back(std::move(e.z));
    }
    std::vector<CVec> distinct;
    for (const auto& c : cluster_points(ends, 1e-5)) distinct.push_back(c.point);
    return count_real(distinct);
  };

  rep.t_ladder = {0.04, 0.01};
  rep.split_observed = true;
  for (double t : rep.t_ladder) {
    rep.real_count_plus.push_back(track_rungs(+1, fiber_plus, t));
    rep.real_count_minus.push_back(track_rungs(-1, fiber_minus, t));
    if (std::min(rep.real_count_plus.back(), rep.real_count_minus.back()) >
        (std::int64_t(1) << (ch.m - 1)))
      rep.split_observed = false;
  }
  return rep;
}

}  // namespace cfn
