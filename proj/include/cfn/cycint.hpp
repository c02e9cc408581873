#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "cfn/group.hpp"

namespace cfn {

using Int = boost::multiprecision::cpp_int;

/// Shared per-conductor data: the cyclotomic polynomial Phi_m and the
/// reductions of zeta_m^k to the power basis 1, zeta, ..., zeta^{phi(m)-1}.
struct CyclotomicContext {
  std::int64_t m;
  std::vector<Int> phi_poly;                  // monic, degree phi(m), index = power
  std::vector<std::vector<Int>> zeta_pow;     // k in [0, m): zeta^k reduced
  std::vector<cx> basis_embedding;            // e^{2 i pi k / m}, k < phi(m)

  std::int64_t degree() const { return std::int64_t(phi_poly.size()) - 1; }

  static const CyclotomicContext& get(std::int64_t m);
};

/// An exact element of Z[zeta_m] in the power basis mod Phi_m.
class CycInt {
 public:
  CycInt() = default;
  CycInt(std::int64_t m, std::vector<Int> coeffs);

  static CycInt zero(std::int64_t m);
  static CycInt integer(std::int64_t m, const Int& c);
  static CycInt zeta_power(std::int64_t m, std::int64_t k);

  std::int64_t conductor() const { return m_; }
  const std::vector<Int>& coeffs() const { return c_; }
  bool is_zero() const;

  CycInt operator+(const CycInt& o) const;
  CycInt operator-(const CycInt& o) const;
  CycInt operator-() const;
  CycInt operator*(const CycInt& o) const;
  bool operator==(const CycInt& o) const;
  bool operator!=(const CycInt& o) const { return !(*this == o); }

  void add_zeta_power(std::int64_t k);  // in-place += zeta^k

  /// Image under zeta_m -> zeta_m^a, a coprime to m (Galois action).
  CycInt galois(std::int64_t a) const;

  /// Re-express in Z[zeta_{m2}] for m | m2.
  CycInt lift(std::int64_t m2) const;

  cx embed() const;  // zeta_m -> e^{2 i pi / m}

 private:
  std::int64_t m_ = 1;
  std::vector<Int> c_;
};

// ---- Character sums --------------------------------------------------------

/// G(chi) = sum_x chi(x) zeta_p^x, exact in Z[zeta_{lcm(p, p-1)}].
CycInt gauss_sum_exact(const DirichletChar& chi);

/// J(chi1, chi2) = sum_x chi1(x) chi2(1-x), exact in Z[zeta_{p-1}].
CycInt jacobi_sum_exact(const DirichletChar& chi1, const DirichletChar& chi2);

// ---- Ratio classification --------------------------------------------------

enum class RatioCase { a, b, c, d, e, f, g, none };

struct JacobiRatioClass {
  bool root_of_unity = false;
  std::int64_t exponent = -1;  // R = zeta_{p-1}^exponent when root_of_unity
  RatioCase case_label = RatioCase::none;
};

char ratio_case_letter(RatioCase c);

/// The seven-case pattern, decided from the character exponents alone (no
/// Jacobi sums).  The exponent pair (t1, t2) is tested for membership in the
/// exceptional families of the orbit classifier with d = p-1; character
/// orders alone do not determine membership (first counterexample p = 31,
/// orders (5, 10)).
RatioCase classify_ratio_case(std::int64_t p, std::int64_t t1, std::int64_t t2);

/// Exact decision whether R(chi1, chi2) = J(conj chi1, chi2) / J(chi1, chi2)
/// is a (p-1)-th root of unity, together with the case label.
JacobiRatioClass ratio_is_root_of_unity(const DirichletChar& chi1,
                                        const DirichletChar& chi2);

// ---- Kummer / Stickelberger reduction --------------------------------------

struct StickelbergerResult {
  std::int64_t sum_value;       // J_{j,k} = sum_{x != 0,1} x^{-j}(1-x)^{-k} mod p
  std::int64_t binomial_value;  // -C(j+k, k) mod p
  bool agree;
  bool nonvanishing;            // J_{j,k} != 0
};

StickelbergerResult stickelberger_reduce(std::int64_t p, std::int64_t j, std::int64_t k);

/// Reduction modulo the prime ideal containing g0 - zeta_{p-1}: evaluate the
/// coefficient polynomial at g0 mod p.
std::int64_t reduce_mod_prime_ideal(const CycInt& z, const GroupCtx& ctx);

/// Exact check that the ratio G(chi0 chi)/G(chi) is never a root of unity.
bool gauss_ratio_not_root_of_unity(const DirichletChar& chi);

}  // namespace cfn
