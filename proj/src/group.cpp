#include "cfn/group.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cfn {

namespace {

std::vector<cx> unit_roots(std::int64_t d) {
  std::vector<cx> w(d);
  for (std::int64_t j = 0; j < d; ++j) {
    double ang = 2.0 * std::numbers::pi * double(j) / double(d);
    w[j] = cx(std::cos(ang), std::sin(ang));
  }
  return w;
}

}  // namespace

bool is_prime_int(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t m) {
  b %= m;
  if (b < 0) b += m;
  std::int64_t r = 1;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  std::int64_t t = 0, nt = 1, r = m, nr = ((a % m) + m) % m;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  if (r != 1) throw std::invalid_argument("mod_inverse: not a unit");
  return t < 0 ? t + m : t;
}

std::int64_t smallest_primitive_root(std::int64_t p) {
  std::int64_t d = p - 1;
  std::vector<std::int64_t> pf;
  std::int64_t n = d;
  for (std::int64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      pf.push_back(q);
      while (n % q == 0) n /= q;
    }
  if (n > 1) pf.push_back(n);
  for (std::int64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (std::int64_t q : pf)
      if (pow_mod(g, d / q, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root");
}

GroupCtx GroupCtx::make(std::int64_t d) {
  if (d < 3 || d % 2 == 0)
    throw std::invalid_argument("group order must be odd and >= 3");
  GroupCtx c;
  c.d = d;
  c.is_prime = is_prime_int(d);
  if (c.is_prime) c.primitive_root_g0 = smallest_primitive_root(d);
  return c;
}

const std::vector<std::int64_t>& GroupCtx::index_table() const {
  if (!is_prime) throw std::logic_error("index table needs prime modulus");
  if (ind_.empty()) {
    ind_.assign(std::size_t(d), -1);
    std::int64_t x = 1;
    for (std::int64_t j = 0; j < d - 1; ++j) {
      ind_[std::size_t(x)] = j;
      x = x * primitive_root_g0 % d;
    }
  }
  return ind_;
}

CyclicFn::CyclicFn(GroupCtx c, std::vector<cx> v) : ctx(c), values(std::move(v)) {
  if (std::int64_t(values.size()) != ctx.d)
    throw std::invalid_argument("value vector length must equal d");
}

CyclicFn CyclicFn::zero(const GroupCtx& c) {
  return CyclicFn(c, std::vector<cx>(std::size_t(c.d), cx(0, 0)));
}

CyclicFn CyclicFn::delta(const GroupCtx& c, std::int64_t at) {
  CyclicFn f = zero(c);
  f.set(at, cx(1, 0));
  return f;
}

cx CyclicFn::at(std::int64_t k) const {
  std::int64_t r = k % ctx.d;
  if (r < 0) r += ctx.d;
  return values[std::size_t(r)];
}

void CyclicFn::set(std::int64_t k, cx v) {
  std::int64_t r = k % ctx.d;
  if (r < 0) r += ctx.d;
  values[std::size_t(r)] = v;
}

CyclicFn CyclicFn::reversed() const {
  CyclicFn g = zero(ctx);
  for (std::int64_t k = 0; k < ctx.d; ++k) g.set(-k, at(k));
  return g;
}

CyclicFn CyclicFn::conjugated() const {
  CyclicFn g = *this;
  for (auto& v : g.values) v = std::conj(v);
  return g;
}

double CyclicFn::norm2() const {
  double s = 0;
  for (auto& v : values) s += std::norm(v);
  return std::sqrt(s);
}

double CyclicFn::sup_dist(const CyclicFn& o) const {
  double m = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    m = std::max(m, std::abs(values[i] - o.values[i]));
  return m;
}

CyclicFn operator+(const CyclicFn& a, const CyclicFn& b) {
  CyclicFn r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += b.values[i];
  return r;
}

CyclicFn operator-(const CyclicFn& a, const CyclicFn& b) {
  CyclicFn r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= b.values[i];
  return r;
}

CyclicFn operator*(cx s, const CyclicFn& a) {
  CyclicFn r = a;
  for (auto& v : r.values) v *= s;
  return r;
}

CyclicFn pointwise(const CyclicFn& a, const CyclicFn& b) {
  CyclicFn r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] *= b.values[i];
  return r;
}

DirichletChar::DirichletChar(GroupCtx c, std::int64_t exponent) : ctx(c) {
  if (!ctx.is_prime) throw std::invalid_argument("Dirichlet character needs prime modulus");
  std::int64_t m = ctx.d - 1;
  t = ((exponent % m) + m) % m;
}

std::int64_t DirichletChar::order() const {
  std::int64_t m = ctx.d - 1;
  return m / std::gcd(t, m);
}

bool DirichletChar::odd() const { return t % 2 == 1; }

cx DirichletChar::eval(std::int64_t x) const {
  std::int64_t p = ctx.d;
  std::int64_t r = ((x % p) + p) % p;
  if (r == 0) return cx(0, 0);
  std::int64_t m = p - 1;
  std::int64_t j = ctx.index_table()[std::size_t(r)];
  double ang = 2.0 * std::numbers::pi * double(t * j % m) / double(m);
  return cx(std::cos(ang), std::sin(ang));
}

CyclicFn DirichletChar::fn() const {
  CyclicFn f = CyclicFn::zero(ctx);
  for (std::int64_t x = 0; x < ctx.d; ++x) f.set(x, eval(x));
  return f;
}

DirichletChar DirichletChar::conj() const { return DirichletChar(ctx, -t); }

DirichletChar DirichletChar::times(const DirichletChar& o) const {
  return DirichletChar(ctx, t + o.t);
}

DirichletChar legendre_char(const GroupCtx& ctx) {
  return DirichletChar(ctx, (ctx.d - 1) / 2);
}

CyclicFn dft(const CyclicFn& f) {
  std::int64_t d = f.d();
  auto w = unit_roots(d);
  double s = 1.0 / std::sqrt(double(d));
  CyclicFn out = CyclicFn::zero(f.ctx);
  for (std::int64_t k = 0; k < d; ++k) {
    cx acc(0, 0);
    for (std::int64_t l = 0; l < d; ++l)
      acc += w[std::size_t(k * l % d)] * f.values[std::size_t(l)];
    out.values[std::size_t(k)] = s * acc;
  }
  return out;
}

CyclicFn convolve(const CyclicFn& f, const CyclicFn& g) {
  if (!(f.ctx == g.ctx)) throw std::invalid_argument("convolve: context mismatch");
  std::int64_t d = f.d();
  CyclicFn out = CyclicFn::zero(f.ctx);
  for (std::int64_t k = 0; k < d; ++k) {
    cx acc(0, 0);
    for (std::int64_t l = 0; l < d; ++l) acc += f.at(k - l) * g.values[std::size_t(l)];
    out.values[std::size_t(k)] = acc;
  }
  return out;
}

CFunctionReport c_function_report(const CyclicFn& f, double tol) {
  CFunctionReport rep;
  std::int64_t d = f.d();
  if (std::abs(f.values[0]) > tol) {
    rep.structural_failure = true;
    rep.reason = "f(0) != 0";
    return rep;
  }
  for (std::int64_t k = 1; k < d; ++k)
    if (std::abs(f.values[std::size_t(k)]) <= tol) {
      rep.structural_failure = true;
      rep.reason = "f vanishes off 0";
      return rep;
    }
  // direct autocorrelation residual
  double worst = 0;
  for (std::int64_t l = 1; l < d; ++l) {
    cx acc(0, 0);
    for (std::int64_t k = 1; k < d; ++k) acc += f.at(k - l) / f.at(k);
    worst = std::max(worst, std::abs(acc + cx(1, 0)));
  }
  rep.residual = worst;
  // Fourier side: g = 1/f off 0, require dft(f) dft(rev g) = 1 off 0
  CyclicFn g = CyclicFn::zero(f.ctx);
  for (std::int64_t k = 1; k < d; ++k) g.set(k, cx(1, 0) / f.at(k));
  CyclicFn fh = dft(f), gh = dft(g.reversed());
  double dual = 0;
  for (std::int64_t k = 1; k < d; ++k)
    dual = std::max(dual, std::abs(fh.at(k) * gh.at(k) - cx(1, 0)));
  rep.dual_residual = dual;
  rep.is_c_function = worst <= tol && dual <= tol;
  return rep;
}

bool is_c_function(const CyclicFn& f, double tol) {
  return c_function_report(f, tol).is_c_function;
}

double biunimodular_residual(const CyclicFn& f, bool punctured) {
  CyclicFn fh = dft(f);
  double worst = 0;
  std::int64_t d = f.d();
  for (std::int64_t k = 0; k < d; ++k) {
    if (punctured && k == 0) {
      worst = std::max(worst, std::abs(f.at(0)));
      worst = std::max(worst, std::abs(fh.at(0)));
    } else {
      worst = std::max(worst, std::abs(std::abs(f.at(k)) - 1.0));
      worst = std::max(worst, std::abs(std::abs(fh.at(k)) - 1.0));
    }
  }
  return worst;
}

bool is_biunimodular(const CyclicFn& f, bool punctured, double tol) {
  return biunimodular_residual(f, punctured) <= tol;
}

CyclicFn gaussian(const GroupCtx& ctx, std::int64_t m, std::int64_t a) {
  std::int64_t d = ctx.d;
  std::int64_t mm = ((m % d) + d) % d;
  if (std::gcd(mm, d) != 1) throw std::invalid_argument("gaussian: m not a unit mod d");
  CyclicFn f = CyclicFn::zero(ctx);
  for (std::int64_t x = 0; x < d; ++x) {
    std::int64_t q = (x - a) % d;
    std::int64_t e = mm % d * (q * q % d) % d;
    double ang = 2.0 * std::numbers::pi * double(e) / double(d);
    f.set(x, cx(std::cos(ang), std::sin(ang)));
  }
  return f;
}

std::vector<CyclicFn> bjorck_saffari(const GroupCtx& ctx) {
  std::int64_t p = ctx.d;
  if (!ctx.is_prime || p < 5) throw std::invalid_argument("bjorck_saffari: need prime p >= 5");
  CyclicFn chi0 = legendre_char(ctx).fn();
  CyclicFn one_star = CyclicFn::zero(ctx);
  for (std::int64_t x = 1; x < p; ++x) one_star.set(x, cx(1, 0));
  CyclicFn d0 = CyclicFn::delta(ctx, 0);
  std::vector<CyclicFn> out;
  if (p % 4 == 1) {
    // cos theta = 1/(sqrt p + 1): forces |hat h(0)| = (1+(p-1)cos theta)/sqrt p = 1
    double ct = 1.0 / (std::sqrt(double(p)) + 1.0);
    double st = std::sqrt(1.0 - ct * ct);
    for (int eps : {+1, -1})
      out.push_back(d0 + ct * one_star + cx(0, eps * st) * chi0);
  } else {
    // tan theta = sqrt p
    double ct = 1.0 / std::sqrt(double(p) + 1.0);
    double st = std::sqrt(double(p) / (double(p) + 1.0));
    double theta = std::atan(std::sqrt(double(p)));
    for (int e1 : {+1, -1})
      for (int e2 : {+1, -1}) {
        cx phase(std::cos(e1 * theta), std::sin(e1 * theta));
        out.push_back(phase * d0 + ct * one_star + cx(0, e2 * st) * chi0);
      }
  }
  return out;
}

std::vector<CyclicFn> odd_basis(const GroupCtx& ctx) {
  std::vector<CyclicFn> out;
  for (std::int64_t j = 1; j <= (ctx.d - 1) / 2; ++j) {
    CyclicFn e = CyclicFn::zero(ctx);
    e.set(j, cx(1, 0));
    e.set(-j, cx(-1, 0));
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace cfn
