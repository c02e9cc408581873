#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cfn {

using cx = std::complex<double>;

/// Context for the cyclic group Z/dZ with d odd, d >= 3.  When d is prime
/// the smallest positive primitive root is cached so Dirichlet characters
/// can be indexed by an exponent of the Teichmuller character.
struct GroupCtx {
  std::int64_t d = 0;
  bool is_prime = false;
  std::int64_t primitive_root_g0 = 0;  // valid only when is_prime

  static GroupCtx make(std::int64_t d);

  // index table: ind[x] = j with g0^j = x (mod d), defined for prime d.
  const std::vector<std::int64_t>& index_table() const;

  bool operator==(const GroupCtx& o) const { return d == o.d; }

 private:
  mutable std::vector<std::int64_t> ind_;
};

/// A complex-valued function on Z/dZ.
struct CyclicFn {
  GroupCtx ctx;
  std::vector<cx> values;  // length d, index = residue

  CyclicFn() = default;
  CyclicFn(GroupCtx c, std::vector<cx> v);
  static CyclicFn zero(const GroupCtx& c);
  static CyclicFn delta(const GroupCtx& c, std::int64_t at);

  std::int64_t d() const { return ctx.d; }
  cx at(std::int64_t k) const;  // reduces k mod d
  void set(std::int64_t k, cx v);

  CyclicFn reversed() const;   // x -> f(-x)
  CyclicFn conjugated() const; // x -> conj(f(x))
  double norm2() const;        // l2 norm
  double sup_dist(const CyclicFn& o) const;
};

CyclicFn operator+(const CyclicFn& a, const CyclicFn& b);
CyclicFn operator-(const CyclicFn& a, const CyclicFn& b);
CyclicFn operator*(cx s, const CyclicFn& a);
CyclicFn pointwise(const CyclicFn& a, const CyclicFn& b);

/// A multiplicative character of F_p^*, chi = omega^t with omega the
/// Teichmuller character (omega(g0) = zeta_{p-1}), extended by chi(0) = 0.
struct DirichletChar {
  GroupCtx ctx;   // prime modulus
  std::int64_t t = 0;  // exponent mod p-1

  DirichletChar(GroupCtx c, std::int64_t exponent);
  std::int64_t p() const { return ctx.d; }
  std::int64_t order() const;
  bool principal() const { return t % (ctx.d - 1) == 0; }
  bool odd() const;  // chi(-1) = -1
  cx eval(std::int64_t x) const;
  CyclicFn fn() const;
  DirichletChar conj() const;
  DirichletChar times(const DirichletChar& o) const;
};

/// Legendre character (unique character of order 2).
DirichletChar legendre_char(const GroupCtx& ctx);

// ---- Fourier transform and convolution -----------------------------------

/// hat f(k) = (1/sqrt d) sum_l e^{+2 i pi k l / d} f(l).
CyclicFn dft(const CyclicFn& f);

/// (f*g)(k) = sum_l f(k-l) g(l).
CyclicFn convolve(const CyclicFn& f, const CyclicFn& g);

// ---- Predicates -----------------------------------------------------------

struct CFunctionReport {
  bool is_c_function = false;
  bool structural_failure = false;  // vanishing off 0 / f(0) != 0
  std::string reason;
  double residual = 0.0;            // max_{l!=0} |sum + 1|
  double dual_residual = 0.0;       // sup |dft(f) dft(rev g) - 1| off 0
};

/// Autocorrelation test: sum_{k!=0} f(k-l) f(k)^{-1} = -1 for l != 0,
/// cross-checked through the Fourier side with g = 1/f off 0.
CFunctionReport c_function_report(const CyclicFn& f, double tol = 1e-10);
bool is_c_function(const CyclicFn& f, double tol = 1e-10);

/// Unit modulus of f and dft(f); punctured variant requires vanishing at 0
/// and unit modulus off 0 for both.
bool is_biunimodular(const CyclicFn& f, bool punctured, double tol = 1e-10);
double biunimodular_residual(const CyclicFn& f, bool punctured);

// ---- Named families -------------------------------------------------------

/// g_{m,a}(x) = e^{2 i pi m (x-a)^2 / d}, gcd(m,d) = 1.
CyclicFn gaussian(const GroupCtx& ctx, std::int64_t m, std::int64_t a);

/// The (F_p^*)^2-invariant biunimodular functions: two of them when
/// p = 1 mod 4, four when p = 3 mod 4.
std::vector<CyclicFn> bjorck_saffari(const GroupCtx& ctx);

/// E_j = delta_j - delta_{-j}, j = 1..(d-1)/2; a basis of the odd subspace.
std::vector<CyclicFn> odd_basis(const GroupCtx& ctx);

// ---- misc helpers ---------------------------------------------------------

bool is_prime_int(std::int64_t n);
std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t m);
std::int64_t mod_inverse(std::int64_t a, std::int64_t m);
std::int64_t smallest_primitive_root(std::int64_t p);

}  // namespace cfn
