#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace cfn {

enum class PairCase { a, b, c, d, e, f, g, none };

char pair_case_letter(PairCase c);

/// Orbit data for (j,k) under (j,k) ~ (xj,xk), x a unit mod d, together with
/// the sign-flipped orbit of (-j,k).
struct PairClass {
  std::int64_t d = 0, j = 0, k = 0;
  std::optional<std::pair<std::int64_t, std::int64_t>> representative;  // j' <= k' <= d-j'
  std::int64_t witness_x = 0;   // unit with (j',k') = (±x j, x k)
  bool witness_flipped = false; // true when the witness acts on (-j,k)
  PairCase exceptional_case = PairCase::none;
  std::int64_t case_param_m = 0;
};

/// Literal sign-pattern match on (d/2, d/6, d/10, d/12, d/30) multiples;
/// PairCase::none means no family matches this exact pair.
PairCase classify_exceptional(std::int64_t d, std::int64_t j, std::int64_t k,
                              std::int64_t* param_m = nullptr);

/// Orbit-closed family membership: the patterns name representatives only, so
/// (j,k) belongs to a family iff some unit multiple (xj, xk) matches one
/// literally.  Membership, unlike the literal match, is invariant under ~.
PairCase classify_exceptional_orbit(std::int64_t d, std::int64_t j, std::int64_t k,
                                    std::int64_t* param_m = nullptr);

/// Exhaustive search over units and both signs for the lexicographically
/// smallest representative j' <= k' <= d-j'.
PairClass find_representative(std::int64_t d, std::int64_t j, std::int64_t k);

struct ScanSummary {
  std::int64_t d = 0;
  std::int64_t total_pairs = 0;
  std::vector<PairClass> exceptional;       // pairs with no representative
  std::map<char, std::int64_t> case_counts; // by family letter
  bool consistent = true;  // representative exists <=> no family matches
};

ScanSummary scan_all_pairs(std::int64_t d);

/// Largest gap between consecutive integers coprime to n.
std::int64_t jacobsthal(std::int64_t n);

/// Number of distinct prime factors.
std::int64_t omega(std::int64_t n);

}  // namespace cfn
