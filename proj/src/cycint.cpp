#include "cfn/cycint.hpp"

#include "cfn/orbits.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cfn {

namespace {

// Exact division of polynomials with integer coefficients; divisor monic.
std::vector<Int> poly_div_exact(std::vector<Int> num, const std::vector<Int>& den) {
  const std::int64_t dn = std::int64_t(num.size()) - 1;
  const std::int64_t dd = std::int64_t(den.size()) - 1;
  std::vector<Int> q(dn - dd + 1, 0);
  for (std::int64_t i = dn; i >= dd; --i) {
    Int c = num[i];
    if (c == 0) continue;
    q[i - dd] = c;
    for (std::int64_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
  }
  for (const Int& r : num)
    if (r != 0) throw std::logic_error("poly_div_exact: nonzero remainder");
  return q;
}

std::vector<Int> cyclotomic_poly(std::int64_t n) {
  // Phi_n = (X^n - 1) / prod_{d | n, d < n} Phi_d
  std::vector<Int> num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (std::int64_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    num = poly_div_exact(std::move(num), cyclotomic_poly(d));
  }
  return num;
}

// reduce in place mod phi (monic); shrinks to degree < deg phi
void poly_reduce(std::vector<Int>& a, const std::vector<Int>& phi) {
  const std::int64_t dp = std::int64_t(phi.size()) - 1;
  for (std::int64_t i = std::int64_t(a.size()) - 1; i >= dp; --i) {
    Int c = a[i];
    if (c != 0)
      for (std::int64_t j = 0; j <= dp; ++j) a[i - dp + j] -= c * phi[j];
  }
  a.resize(dp);
}

std::map<std::int64_t, std::unique_ptr<CyclotomicContext>>& registry() {
  static std::map<std::int64_t, std::unique_ptr<CyclotomicContext>> r;
  return r;
}
std::mutex registry_mutex;

}  // namespace

const CyclotomicContext& CyclotomicContext::get(std::int64_t m) {
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto& reg = registry();
  auto it = reg.find(m);
  if (it != reg.end()) return *it->second;

  auto ctx = std::make_unique<CyclotomicContext>();
  ctx->m = m;
  ctx->phi_poly = cyclotomic_poly(m);
  const std::int64_t deg = ctx->degree();

  ctx->zeta_pow.resize(m);
  std::vector<Int> cur(deg, 0);
  cur[0] = 1;
  for (std::int64_t k = 0; k < m; ++k) {
    ctx->zeta_pow[k] = cur;
    // cur *= X
    cur.insert(cur.begin(), 0);
    poly_reduce(cur, ctx->phi_poly);
  }

  ctx->basis_embedding.resize(deg);
  for (std::int64_t k = 0; k < deg; ++k) {
    double ang = 2.0 * std::numbers::pi * double(k) / double(m);
    ctx->basis_embedding[k] = cx(std::cos(ang), std::sin(ang));
  }

  auto [pos, ok] = reg.emplace(m, std::move(ctx));
  (void)ok;
  return *pos->second;
}

CycInt::CycInt(std::int64_t m, std::vector<Int> coeffs) : m_(m), c_(std::move(coeffs)) {
  const auto& ctx = CyclotomicContext::get(m);
  if (std::int64_t(c_.size()) > ctx.degree()) poly_reduce(c_, ctx.phi_poly);
  c_.resize(ctx.degree());
}

CycInt CycInt::zero(std::int64_t m) {
  return CycInt(m, std::vector<Int>(CyclotomicContext::get(m).degree(), 0));
}

CycInt CycInt::integer(std::int64_t m, const Int& c) {
  CycInt z = zero(m);
  z.c_[0] = c;
  return z;
}

CycInt CycInt::zeta_power(std::int64_t m, std::int64_t k) {
  const auto& ctx = CyclotomicContext::get(m);
  k = ((k % m) + m) % m;
  return CycInt(m, ctx.zeta_pow[k]);
}

bool CycInt::is_zero() const {
  for (const Int& c : c_)
    if (c != 0) return false;
  return true;
}

CycInt CycInt::operator+(const CycInt& o) const {
  CycInt r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

CycInt CycInt::operator-(const CycInt& o) const {
  CycInt r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

CycInt CycInt::operator-() const {
  CycInt r = *this;
  for (Int& c : r.c_) c = -c;
  return r;
}

CycInt CycInt::operator*(const CycInt& o) const {
  const auto& ctx = CyclotomicContext::get(m_);
  std::vector<Int> prod(2 * c_.size(), 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j)
      if (o.c_[j] != 0) prod[i + j] += c_[i] * o.c_[j];
  }
  poly_reduce(prod, ctx.phi_poly);
  return CycInt(m_, std::move(prod));
}

bool CycInt::operator==(const CycInt& o) const { return m_ == o.m_ && c_ == o.c_; }

void CycInt::add_zeta_power(std::int64_t k) {
  const auto& ctx = CyclotomicContext::get(m_);
  k = ((k % m_) + m_) % m_;
  const auto& z = ctx.zeta_pow[k];
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += z[i];
}

CycInt CycInt::galois(std::int64_t a) const {
  if (std::gcd(((a % m_) + m_) % m_, m_) != 1)
    throw std::invalid_argument("galois: exponent not coprime to conductor");
  CycInt r = zero(m_);
  const auto& ctx = CyclotomicContext::get(m_);
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    const auto& z = ctx.zeta_pow[(std::int64_t(k) * (((a % m_) + m_) % m_)) % m_];
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += c_[k] * z[i];
  }
  return r;
}

CycInt CycInt::lift(std::int64_t m2) const {
  if (m2 % m_ != 0) throw std::invalid_argument("lift: conductor not a multiple");
  const std::int64_t step = m2 / m_;
  CycInt r = zero(m2);
  const auto& ctx = CyclotomicContext::get(m2);
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    const auto& z = ctx.zeta_pow[(std::int64_t(k) * step) % m2];
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += c_[k] * z[i];
  }
  return r;
}

cx CycInt::embed() const {
  const auto& ctx = CyclotomicContext::get(m_);
  cx s = 0.0;
  for (std::size_t k = 0; k < c_.size(); ++k)
    if (c_[k] != 0) s += c_[k].convert_to<double>() * ctx.basis_embedding[k];
  return s;
}

// ---- Character sums --------------------------------------------------------

CycInt gauss_sum_exact(const DirichletChar& chi) {
  const std::int64_t p = chi.p();
  const std::int64_t M = p * (p - 1);  // lcm, p coprime to p-1
  const std::int64_t g0 = chi.ctx.primitive_root_g0;
  CycInt s = CycInt::zero(M);
  std::int64_t x = 1;
  for (std::int64_t j = 0; j < p - 1; ++j) {
    // chi(g0^j) zeta_p^{g0^j} = zeta_M^{p t j + (p-1) x}
    s.add_zeta_power(((chi.t % (p - 1)) * j % (p - 1)) * p + (p - 1) * x);
    x = x * g0 % p;
  }
  return s;
}

CycInt jacobi_sum_exact(const DirichletChar& chi1, const DirichletChar& chi2) {
  const std::int64_t p = chi1.p();
  if (chi2.p() != p) throw std::invalid_argument("jacobi_sum_exact: modulus mismatch");
  const auto& ind = chi1.ctx.index_table();
  CycInt s = CycInt::zero(p - 1);
  for (std::int64_t x = 2; x < p; ++x)
    s.add_zeta_power(chi1.t * ind[x] + chi2.t * ind[p + 1 - x]);
  return s;
}

// ---- Ratio classification --------------------------------------------------

char ratio_case_letter(RatioCase c) {
  switch (c) {
    case RatioCase::a: return 'a';
    case RatioCase::b: return 'b';
    case RatioCase::c: return 'c';
    case RatioCase::d: return 'd';
    case RatioCase::e: return 'e';
    case RatioCase::f: return 'f';
    case RatioCase::g: return 'g';
    default: return '-';
  }
}

RatioCase classify_ratio_case(std::int64_t p, std::int64_t t1, std::int64_t t2) {
  const std::int64_t d = p - 1;
  std::int64_t j = ((t1 % d) + d) % d, k = ((t2 % d) + d) % d;
  if (j == 0 || k == 0) return RatioCase::none;  // principal character
  // order-2 chi1 always gives a root of unity (conj chi1 = chi1), with no
  // restriction on chi2; the orbit family excludes the pair (d/2, d/2)
  if (d % 2 == 0 && j == d / 2) return RatioCase::a;
  switch (classify_exceptional_orbit(d, j, k)) {
    case PairCase::a: return RatioCase::a;
    case PairCase::b: return RatioCase::b;
    case PairCase::c: return RatioCase::c;
    case PairCase::d: return RatioCase::d;
    case PairCase::e: return RatioCase::e;
    case PairCase::f: return RatioCase::f;
    case PairCase::g: return RatioCase::g;
    default: return RatioCase::none;
  }
}

JacobiRatioClass ratio_is_root_of_unity(const DirichletChar& chi1,
                                        const DirichletChar& chi2) {
  const std::int64_t p = chi1.p();
  JacobiRatioClass out;
  out.case_label = classify_ratio_case(p, chi1.t, chi2.t);

  CycInt num = jacobi_sum_exact(chi1.conj(), chi2);
  CycInt den = jacobi_sum_exact(chi1, chi2);
  if (den.is_zero()) return out;

  // a root-of-unity ratio forces equal complex moduli; cheap prefilter
  double an = std::abs(num.embed()), ad = std::abs(den.embed());
  if (std::abs(an - ad) > 1e-6 * (1.0 + ad)) return out;

  for (std::int64_t k = 0; k < p - 1; ++k) {
    if (num == CycInt::zeta_power(p - 1, k) * den) {
      out.root_of_unity = true;
      out.exponent = k;
      return out;
    }
  }
  return out;
}

// ---- Kummer / Stickelberger reduction --------------------------------------

StickelbergerResult stickelberger_reduce(std::int64_t p, std::int64_t j, std::int64_t k) {
  StickelbergerResult r{};
  std::int64_t s = 0;
  for (std::int64_t x = 2; x < p; ++x) {
    std::int64_t xi = pow_mod(mod_inverse(x, p), j % (p - 1), p);
    std::int64_t yi = pow_mod(mod_inverse(p + 1 - x, p), k % (p - 1), p);
    s = (s + xi * yi) % p;
  }
  r.sum_value = s;

  Int binom = 1;
  for (std::int64_t i = 1; i <= k; ++i) binom = binom * (j + k - i + 1) / i;
  r.binomial_value = std::int64_t(((-binom) % p + p) % p);
  r.agree = r.sum_value == r.binomial_value;
  r.nonvanishing = r.sum_value != 0;
  return r;
}

std::int64_t reduce_mod_prime_ideal(const CycInt& z, const GroupCtx& ctx) {
  const std::int64_t p = ctx.d;
  if (z.conductor() != p - 1)
    throw std::invalid_argument("reduce_mod_prime_ideal: conductor must be p-1");
  const std::int64_t g0 = ctx.primitive_root_g0;
  Int acc = 0;
  Int pw = 1;
  for (const Int& c : z.coeffs()) {
    acc += c * pw;
    pw = pw * g0 % p;
  }
  return std::int64_t(((acc % p) + p) % p);
}

bool gauss_ratio_not_root_of_unity(const DirichletChar& chi) {
  const DirichletChar chi0 = legendre_char(chi.ctx);
  // degenerate cases: the two Gauss sums have different moduli
  if (chi.principal() || chi.order() == 2) return true;
  // G(chi0 chi)/G(chi) = G(chi0)/J(chi, chi0), and squaring turns the
  // root-of-unity question into the one for J(conj chi, chi0)/J(chi, chi0).
  return !ratio_is_root_of_unity(chi, chi0).root_of_unity;
}

}  // namespace cfn
