#include "cfn/equivariant.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "cfn/cycint.hpp"

namespace cfn {

SubgroupChar SubgroupChar::make(const GroupCtx& ctx, std::int64_t n,
                                std::int64_t c_exponent) {
  if (!ctx.is_prime) throw std::invalid_argument("SubgroupChar: prime modulus required");
  std::int64_t d = ctx.d - 1;
  if (n < 2 || d % n != 0) throw std::invalid_argument("SubgroupChar: index must divide p-1");
  SubgroupChar s;
  s.ctx = ctx;
  s.n = n;
  s.d_H = d / n;
  s.c_exponent = ((c_exponent % s.d_H) + s.d_H) % s.d_H;
  if (s.c_exponent == 0) throw std::invalid_argument("SubgroupChar: c must be non-trivial");
  return s;
}

std::vector<std::int64_t> SubgroupChar::elements() const {
  std::vector<std::int64_t> h;
  std::int64_t g = pow_mod(ctx.primitive_root_g0, n, ctx.d);
  std::int64_t x = 1;
  for (std::int64_t j = 0; j < d_H; ++j) {
    h.push_back(x);
    x = x * g % ctx.d;
  }
  return h;
}

std::int64_t SubgroupChar::d_c() const { return d_H / std::gcd<std::int64_t, std::int64_t>(c_exponent, d_H); }

bool SubgroupChar::c_odd() const {
  if (!contains_minus_one()) return false;
  // -1 = g0^{(p-1)/2} = (g0^n)^{d_H/2}
  return (c_exponent * (d_H / 2)) % d_H != 0 &&
         (2 * (c_exponent * (d_H / 2))) % d_H == 0;
}

cx SubgroupChar::c_eval(std::int64_t j) const {
  std::int64_t e = ((c_exponent * j) % d_H + d_H) % d_H;
  double a = 2.0 * std::numbers::pi * double(e) / double(d_H);
  return cx(std::cos(a), std::sin(a));
}

EquivariantSpace EquivariantSpace::make(const SubgroupChar& base) {
  EquivariantSpace sp;
  sp.base = base;
  const GroupCtx& ctx = base.ctx;
  const std::int64_t p = ctx.d, n = base.n, d_H = base.d_H;
  const auto& ind = ctx.index_table();

  for (std::int64_t j = 0; j < n; ++j)
    sp.coset_reps.push_back(pow_mod(ctx.primitive_root_g0, j, p));

  // f_i(x): write x = g0^e, e = q n + r; then x = g_{r+1} h with h = (g0^n)^q
  for (std::int64_t i = 0; i < n; ++i) {
    CyclicFn f = CyclicFn::zero(ctx);
    for (std::int64_t x = 1; x < p; ++x) {
      std::int64_t e = ind[x];
      if (e % n != i) continue;
      f.set(x, base.c_eval(e / n));
    }
    sp.basis.push_back(std::move(f));
  }

  // characters omega^t restrict to c on H iff t = c_exponent (mod d_H)
  for (std::int64_t u = 0; u < n; ++u)
    sp.character_members.emplace_back(ctx, base.c_exponent % d_H + d_H * u);

  return sp;
}

std::vector<cx> EquivariantSpace::coordinates(const CyclicFn& f) const {
  std::vector<cx> lam;
  for (std::int64_t g : coset_reps) lam.push_back(f.at(g));
  return lam;
}

bool EquivariantSpace::contains(const CyclicFn& f, double tol) const {
  if (std::abs(f.at(0)) > tol) return false;
  CyclicFn rec = CyclicFn::zero(base.ctx);
  auto lam = coordinates(f);
  for (std::size_t i = 0; i < basis.size(); ++i) rec = rec + lam[i] * basis[i];
  return rec.sup_dist(f) <= tol * (1.0 + f.norm2());
}

TransversalityReport criterion_transversal_at(const DirichletChar& chi,
                                              const EquivariantSpace& space) {
  const SubgroupChar& base = space.base;
  const std::int64_t p = base.ctx.d, d = p - 1, d_H = base.d_H;
  if (((chi.t - base.c_exponent) % d_H + d_H) % d_H != 0)
    throw std::invalid_argument("criterion_transversal_at: chi does not extend c");

  TransversalityReport rep;
  rep.point_label = "omega^" + std::to_string(chi.t);
  rep.criterion_verdict = true;
  for (std::int64_t u = 1; u < base.n; ++u) {
    std::int64_t t_psi = d_H * u;
    DirichletChar psi(base.ctx, t_psi);
    CycInt lhs = jacobi_sum_exact(chi, psi);
    CycInt rhs = jacobi_sum_exact(chi.conj(), psi);
    // psi(-1) = (-1)^{t_psi} = zeta_{p-1}^{(p-1)/2 * t_psi}
    if (t_psi % 2 == 1) rhs = CycInt::zeta_power(d, d / 2) * rhs;
    if (lhs == rhs) {
      rep.criterion_verdict = false;
      rep.offending_psi_exponents.push_back(t_psi);
    }
  }
  return rep;
}

TransversalityReport numeric_transversal_at(const CyclicFn& f,
                                            const std::vector<CyclicFn>& basis,
                                            bool punctured, double rank_tol) {
  const std::int64_t p = f.d();
  const std::int64_t x0 = punctured ? 1 : 0;
  CyclicFn fh = dft(f);

  // precondition: f on its torus, fh on the target torus
  double m0 = std::abs(f.at(x0)), mh0 = std::abs(fh.at(x0));
  for (std::int64_t x = x0; x < p; ++x) {
    if (std::abs(std::abs(f.at(x)) - m0) > 1e-8 * (1.0 + m0) ||
        std::abs(std::abs(fh.at(x)) - mh0) > 1e-8 * (1.0 + mh0))
      throw std::invalid_argument("numeric_transversal_at: point off its torus");
  }

  const std::int64_t N = std::int64_t(basis.size());
  std::vector<CyclicFn> bh;
  bh.reserve(basis.size());
  for (const auto& b : basis) bh.push_back(dft(b));

  const std::int64_t rows_per_side = p - 1 - (punctured ? 1 : 0);
  Eigen::MatrixXd A(2 * rows_per_side, 2 * N);
  std::int64_t r = 0;
  auto emit = [&](const std::vector<CyclicFn>& bs, const CyclicFn& pt) {
    for (std::int64_t x = x0 + 1; x < p; ++x, ++r) {
      for (std::int64_t i = 0; i < N; ++i) {
        cx w = bs[i].at(x) * std::conj(pt.at(x)) - bs[i].at(x0) * std::conj(pt.at(x0));
        A(r, 2 * i) = w.real();
        A(r, 2 * i + 1) = -w.imag();
      }
    }
  };
  emit(basis, f);
  emit(bh, fh);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  std::int64_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * smax) ++rank;
  std::int64_t kernel = 2 * N - rank;

  TransversalityReport rep;
  rep.numeric_verdict = kernel == 2;
  rep.tangent_intersection_dim = kernel - 2;
  return rep;
}

TransversalityReport transversal_at(const DirichletChar& chi,
                                    const EquivariantSpace& space,
                                    double rank_tol) {
  TransversalityReport rep = criterion_transversal_at(chi, space);
  TransversalityReport num =
      numeric_transversal_at(chi.fn(), space.basis, /*punctured=*/true, rank_tol);
  rep.numeric_verdict = num.numeric_verdict;
  rep.tangent_intersection_dim = num.tangent_intersection_dim;
  return rep;
}

int character_exception_case(std::int64_t d_c, std::int64_t n) {
  if (d_c == 2 && n % 2 == 1) return 1;
  if (d_c == 2 && n % 12 == 6) return 2;
  if (d_c == 3 && (n % 4 == 0 || n % 10 == 0) && n % 3 != 0) return 3;
  if (d_c == 5 && n % 6 == 0 && n % 5 != 0) return 4;
  return 0;
}

SetupChoice classify_setup(std::int64_t p) {
  if (p < 11 || !is_prime_int(p)) throw std::invalid_argument("classify_setup: prime p >= 11 required");
  SetupChoice out;
  out.p = p;
  std::int64_t d = p - 1;
  if (is_prime_int(d / 2)) {
    out.safe_prime = true;
    return out;
  }
  std::int64_t ell = 0;
  for (std::int64_t q = 3; q <= d; q += 2)
    if (d % q == 0 && is_prime_int(q)) {
      ell = q;
      break;
    }
  if (ell != 0) {
    out.n = ell;
    out.d_c = d / ell;
  } else {
    out.n = 4;  // p-1 a power of two
    out.d_c = d / 4;
  }
  out.c_exponent = 1;  // faithful c, odd since the exponent is odd

  SubgroupChar sc = SubgroupChar::make(GroupCtx::make(p), out.n, out.c_exponent);
  if (!sc.contains_minus_one() || !sc.c_odd() || sc.d_c() != out.d_c ||
      character_exception_case(out.d_c, out.n) != 0)
    throw std::logic_error("classify_setup: chosen (H,c) violates its contract");
  return out;
}

}  // namespace cfn
