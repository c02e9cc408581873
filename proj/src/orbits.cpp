#include "cfn/orbits.hpp"

#include <numeric>
#include <stdexcept>

namespace cfn {

namespace {

bool pm(std::int64_t a, std::int64_t b, std::int64_t d) {
  // a == +-b mod d
  std::int64_t r = ((a - b) % d + d) % d;
  std::int64_t s = ((a + b) % d + d) % d;
  return r == 0 || s == 0;
}

}  // namespace

char pair_case_letter(PairCase c) {
  switch (c) {
    case PairCase::a: return 'a';
    case PairCase::b: return 'b';
    case PairCase::c: return 'c';
    case PairCase::d: return 'd';
    case PairCase::e: return 'e';
    case PairCase::f: return 'f';
    case PairCase::g: return 'g';
    default: return '-';
  }
}

PairCase classify_exceptional(std::int64_t d, std::int64_t j, std::int64_t k,
                              std::int64_t* param_m) {
  auto ret = [&](PairCase c, std::int64_t m) {
    if (param_m) *param_m = m;
    return c;
  };
  if (d % 2 == 0) {
    std::int64_t m = d / 2;
    if (j == m && k != m) return ret(PairCase::a, m);
  }
  if (d % 6 == 0) {
    std::int64_t m = d / 6;
    if (pm(j, 2 * m, d) && pm(k, m, d)) return ret(PairCase::b, m);
  }
  if (d % 10 == 0) {
    std::int64_t m = d / 10;
    if (pm(j, 2 * m, d) && pm(k, m, d)) return ret(PairCase::c, m);
  }
  if (d % 12 == 0) {
    std::int64_t m = d / 12;
    if (pm(j, 3 * m, d) && pm(k, 2 * m, d)) return ret(PairCase::d, m);
    if (pm(j, 4 * m, d) && pm(k, 3 * m, d)) return ret(PairCase::e, m);
  }
  if (d % 30 == 0) {
    std::int64_t m = d / 30;
    if ((pm(j, 6 * m, d) || pm(j, 12 * m, d)) && pm(k, 5 * m, d))
      return ret(PairCase::f, m);
    if (pm(j, 10 * m, d) && (pm(k, 3 * m, d) || pm(k, 9 * m, d)))
      return ret(PairCase::g, m);
  }
  if (param_m) *param_m = 0;
  return PairCase::none;
}

PairCase classify_exceptional_orbit(std::int64_t d, std::int64_t j, std::int64_t k,
                                    std::int64_t* param_m) {
  for (std::int64_t x = 1; x < d; ++x) {
    if (std::gcd(x, d) != 1) continue;
    PairCase c = classify_exceptional(d, j * x % d, k * x % d, param_m);
    if (c != PairCase::none) return c;
  }
  if (param_m) *param_m = 0;
  return PairCase::none;
}

PairClass find_representative(std::int64_t d, std::int64_t j, std::int64_t k) {
  if (j <= 0 || j >= d || k <= 0 || k >= d)
    throw std::out_of_range("find_representative: j,k must lie in (0,d)");
  PairClass out;
  out.d = d;
  out.j = j;
  out.k = k;
  out.exceptional_case = classify_exceptional_orbit(d, j, k, &out.case_param_m);

  for (std::int64_t x = 1; x < d; ++x) {
    if (std::gcd(x, d) != 1) continue;
    for (int flip = 0; flip < 2; ++flip) {
      std::int64_t base = flip ? (d - j) % d : j;
      std::int64_t jp = base * x % d;
      std::int64_t kp = k * x % d;
      if (jp == 0 || kp == 0) continue;
      if (!(jp <= kp && kp <= d - jp)) continue;
      if (!out.representative || std::make_pair(jp, kp) < *out.representative) {
        out.representative = {jp, kp};
        out.witness_x = x;
        out.witness_flipped = flip != 0;
      }
    }
  }
  return out;
}

ScanSummary scan_all_pairs(std::int64_t d) {
  ScanSummary s;
  s.d = d;
  for (std::int64_t j = 1; j < d; ++j) {
    for (std::int64_t k = 1; k < d; ++k) {
      ++s.total_pairs;
      PairClass pc = find_representative(d, j, k);
      bool has_rep = pc.representative.has_value();
      bool matched = pc.exceptional_case != PairCase::none;
      if (has_rep == matched) s.consistent = false;
      if (matched) {
        ++s.case_counts[pair_case_letter(pc.exceptional_case)];
        s.exceptional.push_back(pc);
      }
    }
  }
  return s;
}

std::int64_t jacobsthal(std::int64_t n) {
  if (n < 2) throw std::invalid_argument("jacobsthal: n >= 2 required");
  std::int64_t best = 0, last = -1;
  for (std::int64_t x = 0; x <= 2 * n; ++x) {
    if (std::gcd(x, n) != 1) continue;
    if (last >= 0 && x - last > best) best = x - last;
    last = x;
  }
  return best;
}

std::int64_t omega(std::int64_t n) {
  std::int64_t w = 0;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ++w;
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ++w;
  return w;
}

}  // namespace cfn
