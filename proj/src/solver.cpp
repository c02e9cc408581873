#include "cfn/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cfn {

OddSystem OddSystem::make(std::int64_t d) {
  if (d < 5 || d % 2 == 0) throw std::invalid_argument("OddSystem: odd d >= 5 required");
  OddSystem sys;
  sys.ctx = GroupCtx::make(d);
  sys.n = (d - 1) / 2;
  sys.dim = 2 * sys.n - 2;
  sys.S = CMat(sys.n, sys.n);
  for (std::int64_t k = 1; k <= sys.n; ++k)
    for (std::int64_t x = 1; x <= sys.n; ++x)
      sys.S(k - 1, x - 1) =
          cx(0, 2.0 / std::sqrt(double(d))) * std::sin(2.0 * std::numbers::pi * k * x / d);
  return sys;
}

CyclicFn OddSystem::f_of(const CVec& z) const {
  CyclicFn f = CyclicFn::zero(ctx);
  f.set(1, 1);
  f.set(-1, -1);
  for (std::int64_t x = 2; x <= n; ++x) {
    f.set(x, z(x - 2));
    f.set(-x, -z(x - 2));
  }
  return f;
}

CyclicFn OddSystem::g_of(const CVec& z) const {
  CyclicFn g = CyclicFn::zero(ctx);
  g.set(1, 1);
  g.set(-1, -1);
  for (std::int64_t x = 2; x <= n; ++x) {
    g.set(x, z(n - 3 + x));
    g.set(-x, -z(n - 3 + x));
  }
  return g;
}

CVec OddSystem::pack(const CyclicFn& f, const CyclicFn& g) const {
  CVec z(dim);
  for (std::int64_t x = 2; x <= n; ++x) {
    z(x - 2) = f.at(x);
    z(n - 3 + x) = g.at(x);
  }
  return z;
}

CVec OddSystem::target_point() const {
  CVec w(dim);
  for (std::int64_t i = 0; i < n - 1; ++i) {
    w(i) = 1;
    w(n - 1 + i) = -1;
  }
  return w;
}

CVec OddSystem::target_start() const {
  CVec w = CVec::Zero(dim);
  w(n - 1) = -1;  // (fhat ghat)(1) = -1; all other listed components vanish
  return w;
}

CVec OddSystem::residual(const CVec& z, const CVec& target) const {
  CVec vf(n), vg(n);
  vf(0) = 1;
  vg(0) = 1;
  for (std::int64_t x = 2; x <= n; ++x) {
    vf(x - 1) = z(x - 2);
    vg(x - 1) = z(n - 3 + x);
  }
  CVec fh = S * vf, gh = S * vg;
  CVec r(dim);
  for (std::int64_t x = 2; x <= n; ++x) r(x - 2) = vf(x - 1) * vg(x - 1) - target(x - 2);
  for (std::int64_t k = 1; k <= n - 1; ++k)
    r(n - 2 + k) = fh(k - 1) * gh(k - 1) - target(n - 2 + k);
  return r;
}

CMat OddSystem::jacobian(const CVec& z) const {
  CVec vf(n), vg(n);
  vf(0) = 1;
  vg(0) = 1;
  for (std::int64_t x = 2; x <= n; ++x) {
    vf(x - 1) = z(x - 2);
    vg(x - 1) = z(n - 3 + x);
  }
  CVec fh = S * vf, gh = S * vg;
  CMat jac = CMat::Zero(dim, dim);
  for (std::int64_t x = 2; x <= n; ++x) {
    jac(x - 2, x - 2) = vg(x - 1);
    jac(x - 2, n - 3 + x) = vf(x - 1);
  }
  for (std::int64_t k = 1; k <= n - 1; ++k)
    for (std::int64_t y = 2; y <= n; ++y) {
      jac(n - 2 + k, y - 2) = S(k - 1, y - 1) * gh(k - 1);
      jac(n - 2 + k, n - 3 + y) = fh(k - 1) * S(k - 1, y - 1);
    }
  return jac;
}

std::vector<StartPair> start_fiber(const EquivariantSpace& space) {
  const SubgroupChar& base = space.base;
  if (!base.contains_minus_one())
    throw std::invalid_argument("start_fiber: -1 must lie in the subgroup");
  const std::int64_t n = base.n;
  if (n - 1 > 30) throw std::invalid_argument("start_fiber: index too large");

  std::vector<CyclicFn> bhat;
  for (const auto& b : space.basis) bhat.push_back(dft(b));

  // kernel vector of f -> fhat restricted off B, for supports given as masks
  // over the non-trivial coset indices 1..n-1
  std::map<std::pair<std::uint64_t, std::uint64_t>, CyclicFn> memo;
  auto kernel_fn = [&](std::uint64_t mA, std::uint64_t mB) -> const CyclicFn& {
    auto it = memo.find({mA, mB});
    if (it != memo.end()) return it->second;
    std::vector<std::int64_t> cols{0}, rows;
    for (std::int64_t j = 1; j < n; ++j) {
      if (mA >> (j - 1) & 1) cols.push_back(j);
      if (!(mB >> (j - 1) & 1)) rows.push_back(j);
    }
    const std::int64_t na = std::int64_t(cols.size());
    CVec ker;
    if (rows.empty()) {
      ker = CVec::Ones(1);
    } else {
      CMat M(rows.size(), na);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::int64_t c = 0; c < na; ++c)
          M(r, c) = bhat[cols[c]].at(space.coset_reps[rows[r]]);
      Eigen::JacobiSVD<CMat> svd(M, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      for (std::int64_t i = 0; i + 1 < na; ++i)
        if (sv(i) <= 1e-10 * std::max(1.0, sv(0)))
          throw std::logic_error("start_fiber: restriction map dropped rank");
      ker = svd.matrixV().col(na - 1);
    }
    CyclicFn f = CyclicFn::zero(base.ctx);
    for (std::int64_t c = 0; c < na; ++c) f = f + ker(c) * space.basis[cols[c]];
    cx v1 = f.at(1);
    if (std::abs(v1) < 1e-12)
      throw std::logic_error("start_fiber: kernel function vanishes at 1");
    f = (1.0 / v1) * f;
    return memo.emplace(std::make_pair(mA, mB), std::move(f)).first->second;
  };

  CyclicFn one_H = CyclicFn::zero(base.ctx);
  for (std::int64_t h : base.elements()) one_H.set(h, 1);
  const cx lambda = std::conj(base.c_eval(base.d_H / 2));  // conj c(-1)

  std::vector<StartPair> out;
  const std::uint64_t full = (std::uint64_t(1) << (n - 1)) - 1;
  for (std::uint64_t mA = 0; mA <= full; ++mA)
    for (std::uint64_t mB = 0; mB <= full; ++mB) {
      if (std::popcount(mA) + std::popcount(mB) != int(n - 1)) continue;
      StartPair sp;
      sp.f = kernel_fn(mA, mB);
      sp.g = kernel_fn(full & ~mA, full & ~mB).conjugated();
      sp.A_orbits.push_back(0);
      sp.B_orbits.push_back(0);
      for (std::int64_t j = 1; j < n; ++j) {
        if (mA >> (j - 1) & 1) sp.A_orbits.push_back(j);
        if (mB >> (j - 1) & 1) sp.B_orbits.push_back(j);
      }
      if (pointwise(sp.f, sp.g).sup_dist(one_H) > 1e-10 ||
          pointwise(dft(sp.f), dft(sp.g)).sup_dist(lambda * one_H) > 1e-10)
        throw std::logic_error("start_fiber: split-fiber identity failed");
      out.push_back(std::move(sp));
    }
  return out;
}

std::int64_t SolutionSet::total_multiplicity() const {
  std::int64_t s = 0;
  for (const auto& e : entries) s += e.multiplicity;
  return s;
}
std::int64_t SolutionSet::unimodular_multiplicity() const {
  std::int64_t s = 0;
  for (const auto& e : entries)
    if (e.tags.is_unimodular) s += e.multiplicity;
  return s;
}
std::int64_t SolutionSet::dirichlet_count() const {
  std::int64_t s = 0;
  for (const auto& e : entries)
    if (e.tags.is_dirichlet) ++s;
  return s;
}
std::int64_t SolutionSet::real_valued_count() const {
  std::int64_t s = 0;
  for (const auto& e : entries)
    if (e.tags.is_real_valued) ++s;
  return s;
}

namespace {

// odd multiplicative characters on C_d when the unit group is cyclic,
// as coordinate vectors of (f, 1/f off the units' complement)
std::vector<std::pair<std::int64_t, CVec>> odd_character_points(const OddSystem& sys) {
  const std::int64_t d = sys.ctx.d;
  std::vector<std::int64_t> units;
  for (std::int64_t x = 1; x < d; ++x)
    if (std::gcd(x, d) == 1) units.push_back(x);
  const std::int64_t m = std::int64_t(units.size());
  std::int64_t gen = -1;
  for (std::int64_t g : units) {
    std::int64_t x = 1, ord = 0;
    do {
      x = x * g % d;
      ++ord;
    } while (x != 1);
    if (ord == m) {
      gen = g;
      break;
    }
  }
  std::vector<std::pair<std::int64_t, CVec>> out;
  if (gen < 0) return out;  // non-cyclic unit group: no catalog
  std::vector<std::int64_t> ind(d, -1);
  std::int64_t x = 1;
  for (std::int64_t j = 0; j < m; ++j) {
    ind[x] = j;
    x = x * gen % d;
  }
  for (std::int64_t t = 1; t < m; t += 2) {  // odd characters: chi(-1) = -1
    if ((t * ind[d - 1]) % m != m / 2) continue;
    CyclicFn chi = CyclicFn::zero(sys.ctx), inv = CyclicFn::zero(sys.ctx);
    for (std::int64_t u : units) {
      double a = 2.0 * std::numbers::pi * double((t * ind[u]) % m) / double(m);
      chi.set(u, std::polar(1.0, a));
      inv.set(u, std::polar(1.0, -a));
    }
    out.emplace_back(t, sys.pack(chi, inv));
  }
  return out;
}

double polish(const OddSystem& sys, CVec& z, const CVec& target, double tol) {
  double best = sys.residual(z, target).norm();
  for (int it = 0; it < 400; ++it) {
    CVec r = sys.residual(z, target);
    if (r.norm() <= tol) break;
    Eigen::PartialPivLU<CMat> lu(sys.jacobian(z));
    CVec dz = lu.solve(r);
    if (!dz.allFinite() || dz.norm() > 1.0) break;
    z -= dz;
    double now = sys.residual(z, target).norm();
    if (now >= best && it > 4) break;
    best = std::min(best, now);
  }
  return sys.residual(z, target).norm();
}

SolutionSet classify_endpoints(const OddSystem& sys, std::vector<CVec> ends,
                               std::int64_t total_paths, std::int64_t diverged,
                               const SolveOptions& opts) {
  const CVec w_end = sys.target_point();
  SolutionSet set;
  set.d = sys.ctx.d;
  set.total_paths = total_paths;

  std::vector<CVec> good;
  for (auto& z : ends) {
    double r = polish(sys, z, w_end, 1e-13);
    if (r <= opts.residual_tol)
      good.push_back(std::move(z));
    else
      ++diverged;
  }
  set.diverged = diverged;

  auto characters = odd_character_points(sys);
  for (const auto& c : cluster_points(good, opts.cluster_radius)) {
    SolutionEntry e;
    CVec z = c.point;
    e.multiplicity = c.multiplicity;
    for (const auto& [t, zc] : characters)
      if ((z - zc).norm() < 1e-3) {
        z = zc;  // snap the cluster representative to the exact character
        e.tags.is_dirichlet = true;
        e.tags.dirichlet_exponent = t;
        break;
      }
    if (!e.tags.is_dirichlet) polish(sys, z, w_end, 1e-14);
    e.f = sys.f_of(z);
    e.g = sys.g_of(z);
    e.residual = sys.residual(z, w_end).norm();

    bool uni = true, real = true;
    for (std::int64_t x = 1; x < sys.ctx.d; ++x) {
      if (std::abs(std::abs(e.f.at(x)) - 1.0) > 1e-6 ||
          std::abs(e.g.at(x) - std::conj(e.f.at(x))) > 1e-6)
        uni = false;
      if (std::abs(e.f.at(x).imag()) > 1e-6) real = false;
    }
    e.tags.is_unimodular = uni;
    e.tags.is_real_valued = real;
    set.entries.push_back(std::move(e));
  }

  std::sort(set.entries.begin(), set.entries.end(),
            [&](const SolutionEntry& a, const SolutionEntry& b) {
              for (std::int64_t x = 0; x < sys.ctx.d; ++x) {
                auto ra = std::llround(a.f.at(x).real() * 1e8),
                     rb = std::llround(b.f.at(x).real() * 1e8);
                if (ra != rb) return ra < rb;
                auto ia = std::llround(a.f.at(x).imag() * 1e8),
                     ib = std::llround(b.f.at(x).imag() * 1e8);
                if (ia != ib) return ia < ib;
              }
              return false;
            });
  return set;
}

}  // namespace

SolutionSet solve_odd_cfunctions(std::int64_t d, SolveMethod method,
                                 std::uint64_t seed, const SolveOptions& opts) {
  OddSystem sys = OddSystem::make(d);
  const CVec w_end = sys.target_point();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);

  if (method == SolveMethod::total_degree) {
    auto F = [&](const CVec& z) -> CVec { return sys.residual(z, w_end); };
    auto J = [&](const CVec& z) -> CMat { return sys.jacobian(z); };
    TrackOptions topts;
    topts.newton_tol = opts.newton_tol;
    auto td = total_degree_solve(sys.dim, 2, F, J, rng(), topts);
    std::vector<CVec> ends;
    std::int64_t diverged = td.failures;
    for (auto& z : td.endpoints) {
      if (z.norm() > 1e6) {
        ++diverged;
        continue;
      }
      ends.push_back(std::move(z));
    }
    return classify_endpoints(sys, std::move(ends), td.paths, diverged, opts);
  }

  if (!sys.ctx.is_prime)
    throw std::invalid_argument("solve_odd_cfunctions: split-fiber start requires prime d");
  auto space = EquivariantSpace::make(SubgroupChar::make(sys.ctx, sys.n, 1));
  auto starts = start_fiber(space);

  const CVec w_start = sys.target_start();
  auto make_homotopy = [&](const CVec& way) -> Homotopy {
    Homotopy h;
    h.dim = sys.dim;
    h.F = [&sys, w_start, way, w_end](const CVec& z, double t) -> CVec {
      CVec w = t <= 0.5 ? (1.0 - 2.0 * t) * w_start + (2.0 * t) * way
                        : (2.0 - 2.0 * t) * way + (2.0 * t - 1.0) * w_end;
      return sys.residual(z, w);
    };
    h.J = [&sys](const CVec& z, double) -> CMat { return sys.jacobian(z); };
    return h;
  };
  auto random_waypoint = [&]() -> CVec {
    CVec w(sys.dim);
    for (std::int64_t i = 0; i < sys.dim; ++i) w(i) = cx(nd(rng), nd(rng));
    return w;
  };

  TrackOptions topts;
  topts.newton_tol = 1e-10;
  topts.t_end = 1.0 - 1e-6;  // stop short: the end fiber may contain a
                             // multiple point where Newton cannot tighten
  const std::int64_t n_paths = std::int64_t(starts.size());

  // A path's endpoint depends on the chosen waypoint, so every path of a run
  // must follow the same waypoint or the start-to-solution correspondence is
  // lost.  A run is accepted only if every path converged and no two ends
  // coincide at a regular point (paths may only meet at a singular endpoint,
  // and distinct solutions here are separated by far more than 1e-3); a path
  // jump near a discriminant crossing fails the whole run, which is retried
  // with a fresh waypoint.
  std::vector<CVec> ends;
  std::int64_t diverged = 0;
  for (int attempt = 0; attempt < 10; ++attempt) {
    CVec way = random_waypoint();
    Homotopy h = make_homotopy(way);
    std::vector<CVec> run;
    std::int64_t failed = 0;
    for (const auto& sp : starts) {
      PathPoint e = track_path(h, sys.pack(sp.f, sp.g), topts);
      if (!e.ok) {
        ++failed;
        continue;
      }
      polish(sys, e.z, w_end, 1e-13);
      run.push_back(std::move(e.z));
    }
    bool jumped = false;
    for (std::size_t i = 0; i < run.size() && !jumped; ++i)
      for (std::size_t j = 0; j < i && !jumped; ++j) {
        if ((run[i] - run[j]).norm() > 1e-3) continue;
        Eigen::JacobiSVD<CMat> svd(sys.jacobian(run[i]));
        jumped = svd.singularValues().minCoeff() > 1e-6;
      }
    ends = std::move(run);
    diverged = failed;
    if (failed == 0 && !jumped) break;
  }
  return classify_endpoints(sys, std::move(ends), n_paths, diverged, opts);
}

UncertaintyReport uncertainty_check(const CyclicFn& f, double tol) {
  const std::int64_t p = f.d();
  UncertaintyReport rep;
  CyclicFn fh = dft(f);
  for (std::int64_t x = 0; x < p; ++x) {
    if (std::abs(f.at(x)) > tol) ++rep.supp_f;
    if (std::abs(fh.at(x)) > tol) ++rep.supp_fhat;
  }
  if (rep.supp_f == 0) throw std::invalid_argument("uncertainty_check: zero function");
  rep.holds = rep.supp_f + rep.supp_fhat >= p + 1;
  rep.equality = rep.supp_f + rep.supp_fhat == p + 1;
  return rep;
}

CycInt chebotarev_minor(std::int64_t p, const std::vector<std::int64_t>& A,
                        const std::vector<std::int64_t>& B) {
  if (A.size() != B.size()) throw std::invalid_argument("chebotarev_minor: size mismatch");
  const std::int64_t k = std::int64_t(A.size());
  std::vector<std::int64_t> perm(k);
  for (std::int64_t i = 0; i < k; ++i) perm[i] = i;
  CycInt pos = CycInt::zero(p), neg = CycInt::zero(p);
  do {
    std::int64_t inv = 0, e = 0;
    for (std::int64_t i = 0; i < k; ++i) {
      e += A[i] * B[perm[i]];
      for (std::int64_t j = i + 1; j < k; ++j)
        if (perm[j] < perm[i]) ++inv;
    }
    (inv % 2 == 0 ? pos : neg).add_zeta_power(((e % p) + p) % p);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return pos - neg;
}

namespace {

struct KnownFamilies {
  std::vector<CyclicFn> fns;
  std::vector<int> kind;  // 0 gaussian, 1 bs-translate
};

KnownFamilies known_biunimodular(const GroupCtx& ctx) {
  const std::int64_t p = ctx.d;
  KnownFamilies cat;
  for (std::int64_t m = 1; m < p; ++m)
    for (std::int64_t a = 0; a < p; ++a) {
      CyclicFn g = gaussian(ctx, m, a);
      cat.fns.push_back((1.0 / g.at(0)) * g);
      cat.kind.push_back(0);
    }
  // translates and modulations of the invariant family, value at 0 fixed to 1
  for (const auto& h : bjorck_saffari(ctx))
    for (std::int64_t a = 0; a < p; ++a)
      for (std::int64_t t = 0; t < p; ++t) {
        CyclicFn f = CyclicFn::zero(ctx);
        for (std::int64_t x = 0; x < p; ++x)
          f.set(x, std::polar(1.0, 2.0 * std::numbers::pi * t * x / p) * h.at(x - a));
        cat.fns.push_back((1.0 / f.at(0)) * f);
        cat.kind.push_back(1);
      }
  return cat;
}

}  // namespace

BiunimodularReport biunimodular_search(std::int64_t p, std::int64_t trials,
                                       std::uint64_t seed) {
  if (!is_prime_int(p) || p < 5)
    throw std::invalid_argument("biunimodular_search: prime p >= 5 required");
  auto ctx = GroupCtx::make(p);
  auto cat = known_biunimodular(ctx);

  BiunimodularReport rep;
  rep.p = p;
  rep.trials = trials;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);

  auto fn_of = [&](const Eigen::VectorXd& th) -> CyclicFn {
    CyclicFn f = CyclicFn::zero(ctx);
    f.set(0, 1);
    for (std::int64_t x = 1; x < p; ++x) f.set(x, std::polar(1.0, th(x - 1)));
    return f;
  };

  for (std::int64_t tr = 0; tr < trials; ++tr) {
    Eigen::VectorXd th(p - 1);
    for (std::int64_t i = 0; i < p - 1; ++i) th(i) = u(rng);
    double rn = 0;
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
      CyclicFn f = fn_of(th);
      CyclicFn fh = dft(f);
      Eigen::VectorXd r(p);
      for (std::int64_t k = 0; k < p; ++k) r(k) = std::norm(fh.at(k)) - 1.0;
      rn = r.norm();
      if (rn < 1e-12) {
        ok = true;
        break;
      }
      Eigen::MatrixXd J(p, p - 1);
      for (std::int64_t k = 0; k < p; ++k)
        for (std::int64_t x = 1; x < p; ++x) {
          cx w = cx(0, 1) * f.at(x) *
                 std::polar(1.0 / std::sqrt(double(p)),
                            2.0 * std::numbers::pi * k * x / p);
          J(k, x - 1) = 2.0 * (std::conj(fh.at(k)) * w).real();
        }
      Eigen::VectorXd step = J.colPivHouseholderQr().solve(r);
      // damped update
      double sc = 1.0;
      for (int bt = 0; bt < 12; ++bt, sc *= 0.5) {
        Eigen::VectorXd tn = th - sc * step;
        CyclicFn fn2 = fn_of(tn);
        CyclicFn fh2 = dft(fn2);
        double rn2 = 0;
        for (std::int64_t k = 0; k < p; ++k)
          rn2 += std::pow(std::norm(fh2.at(k)) - 1.0, 2);
        if (std::sqrt(rn2) < rn) {
          th = tn;
          break;
        }
      }
    }
    if (!ok) continue;
    ++rep.converged;
    CyclicFn f = fn_of(th);
    double res = biunimodular_residual(f, false);

    bool seen = false;
    for (auto& hit : rep.functions)
      if (hit.f.sup_dist(f) < 1e-6) {
        ++hit.hits;
        seen = true;
        break;
      }
    if (seen) continue;

    BiunimodularHit hit;
    hit.f = f;
    hit.residual = res;
    hit.hits = 1;
    hit.tag = "new";
    for (std::size_t i = 0; i < cat.fns.size(); ++i)
      if (cat.fns[i].sup_dist(f) < 1e-6) {
        hit.tag = cat.kind[i] == 0 ? "gaussian" : "bs-translate";
        break;
      }
    rep.functions.push_back(std::move(hit));
  }
  for (const auto& hit : rep.functions) {
    if (hit.tag == "gaussian") ++rep.gaussian_found;
    else if (hit.tag == "bs-translate") ++rep.bs_translate_found;
    else ++rep.new_found;
  }
  return rep;
}

}  // namespace cfn
