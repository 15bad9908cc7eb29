#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zpell/arith.hpp"

namespace zpell {

/// Finite expansion [0; a1, ..., ak] of a rational in [0, 1).
///
/// numerator/denominator are stored in lowest terms; `gcd` is the common
/// factor removed from the caller's input. Zero has the empty expansion.
struct RationalCF {
  u64 numerator = 0;
  u64 denominator = 1;
  u64 gcd = 1;
  std::vector<u64> quotients;

  bool canonical() const { return quotients.size() <= 1 || quotients.back() >= 2; }
  // 0 for the empty expansion.
  u64 max_quotient() const;
};

/// Periodic expansion sqrt(D) = [a0; period, period, ...] with minimal period.
struct SurdCF {
  u64 D = 0;
  u64 a0 = 0;
  std::vector<u64> period;
};

struct Convergent {
  u64 p;
  u64 q;
  friend bool operator==(const Convergent&, const Convergent&) = default;
};

/// Canonical expansion of a/t. Throws DomainError when t = 0 or a >= t.
RationalCF cf_of_rational(u64 a, u64 t);

/// The other expansion of the same value: [..., ak] <-> [..., ak - 1, 1].
RationalCF cf_alternate(const RationalCF& cf);

/// Exact (P, Q, a) recurrence; throws SquareDiscriminant for perfect squares.
SurdCF cf_of_sqrt(u64 D);

/// Convergents p_j/q_j of [0; a1, ..., aj] for each prefix. Throws
/// std::overflow_error if a continuant leaves the 64-bit range.
std::vector<Convergent> convergents(std::span<const u64> quotients);

/// Value of [0; a1, ..., ak] as p/q in lowest terms; (0, 1) for the empty list.
Convergent reconstruct(std::span<const u64> quotients);

}  // namespace zpell
