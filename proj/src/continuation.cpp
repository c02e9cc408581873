#include "cfn/continuation.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace cfn {

bool newton_refine(const Homotopy& h, CVec& z, double t, double tol, int iters) {
  for (int it = 0; it < iters; ++it) {
    CVec r = h.F(z, t);
    if (r.norm() <= tol) return true;
    Eigen::PartialPivLU<CMat> lu(h.J(z, t));
    CVec dz = lu.solve(r);
    if (!dz.allFinite()) return false;
    z -= dz;
  }
  return h.F(z, t).norm() <= tol;
}

namespace {

// short corrector: must converge in a handful of iterations and stay close to
// the prediction, otherwise the step is rejected (guards against jumping onto
// a neighboring path near a discriminant crossing)
bool correct_step(const Homotopy& h, CVec& z, double t, double tol, double leash) {
  CVec start = z;
  for (int it = 0; it < 5; ++it) {
    CVec r = h.F(z, t);
    if (r.norm() <= tol) return (z - start).norm() <= leash;
    Eigen::PartialPivLU<CMat> lu(h.J(z, t));
    CVec dz = lu.solve(r);
    if (!dz.allFinite()) return false;
    z -= dz;
    if ((z - start).norm() > leash) return false;
  }
  return h.F(z, t).norm() <= tol && (z - start).norm() <= leash;
}

}  // namespace

PathPoint track_path(const Homotopy& h, CVec z0, const TrackOptions& opts) {
  double t = 0.0, step = opts.step_init;
  CVec z = std::move(z0);
  int bad = 0, steps = 0;
  while (t < opts.t_end) {
    if (++steps > opts.max_steps) return {z, t, false};
    double dt = std::min(step, opts.t_end - t);
    // tangent predictor: J dz = -(dF/dt) dt, with dF/dt by a forward difference
    double ft = std::min(1e-7, dt);
    CVec dFdt = (h.F(z, t + ft) - h.F(z, t)) / ft;
    CVec zp = z;
    Eigen::PartialPivLU<CMat> lu(h.J(z, t));
    CVec tang = lu.solve(dFdt);
    if (tang.allFinite()) zp -= dt * tang;
    double tol = std::max(opts.newton_tol, 1e-11);
    double leash = 0.25 * (1.0 + z.norm());
    if (correct_step(h, zp, t + dt, tol, leash)) {
      z = std::move(zp);
      t += dt;
      bad = 0;
      step = std::min(step * 1.5, opts.step_init);
      if (z.norm() > opts.escape_norm) return {z, t, false};  // path escaping
      if (opts.t_end - t <= 1e-10) break;        // avoid stalling at t_end
    } else {
      step *= 0.5;
      if (step < opts.step_min && ++bad > opts.retries)
        return {z, t, false};
    }
  }
  bool ok = newton_refine(h, z, opts.t_end, opts.newton_tol, opts.newton_iters);
  return {z, opts.t_end, ok};
}

TotalDegreeResult total_degree_solve(std::int64_t dim, int deg,
                                     const std::function<CVec(const CVec&)>& F,
                                     const std::function<CMat(const CVec&)>& J,
                                     std::uint64_t seed,
                                     const TrackOptions& opts) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> rad(0.7, 1.3);
  cx gamma = std::polar(1.0, ang(rng));
  CVec r(dim);
  for (std::int64_t i = 0; i < dim; ++i) r(i) = std::polar(rad(rng), ang(rng));

  Homotopy h;
  h.dim = dim;
  h.F = [&, gamma, r](const CVec& z, double t) -> CVec {
    CVec s(dim);
    for (std::int64_t i = 0; i < dim; ++i) s(i) = std::pow(z(i), deg) - r(i);
    return t * F(z) + (1.0 - t) * gamma * s;
  };
  h.J = [&, gamma](const CVec& z, double t) -> CMat {
    CMat m = t * J(z);
    for (std::int64_t i = 0; i < dim; ++i)
      m(i, i) += (1.0 - t) * gamma * double(deg) * std::pow(z(i), deg - 1);
    return m;
  };

  std::int64_t total = 1;
  for (std::int64_t i = 0; i < dim; ++i) total *= deg;

  TotalDegreeResult out;
  out.paths = total;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    CVec z0(dim);
    std::int64_t c = idx;
    for (std::int64_t i = 0; i < dim; ++i, c /= deg) {
      double th = (std::arg(r(i)) + 2.0 * std::numbers::pi * double(c % deg)) / deg;
      z0(i) = std::polar(std::pow(std::abs(r(i)), 1.0 / deg), th);
    }
    PathPoint end = track_path(h, std::move(z0), opts);
    if (end.ok && newton_refine(h, end.z, 1.0, opts.newton_tol, 2 * opts.newton_iters))
      out.endpoints.push_back(std::move(end.z));
    else
      ++out.failures;
  }
  return out;
}

std::vector<Cluster> cluster_points(const std::vector<CVec>& pts, double radius) {
  std::vector<Cluster> cl;
  for (const auto& z : pts) {
    bool placed = false;
    for (auto& c : cl)
      if ((c.point - z).norm() <= radius) {
        ++c.multiplicity;
        placed = true;
        break;
      }
    if (!placed) cl.push_back({z, 1});
  }
  return cl;
}

}  // namespace cfn
