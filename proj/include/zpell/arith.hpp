#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace zpell {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// floor(sqrt(n)), exact for the full 64-bit range.
u64 isqrt(u64 n);
// floor(sqrt(n)) for 128-bit arguments below 2^126.
u64 isqrt128(u128 n);
bool is_square(u64 n);

u64 gcd(u64 a, u64 b);

// Inverse of a modulo m; requires gcd(a, m) = 1 and m >= 1.
u64 inverse_mod(u64 a, u64 m);

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

struct PrimePower {
  u64 prime;
  unsigned exponent;
};

// Trial division over a 2,3,5 wheel. Ascending primes.
std::vector<PrimePower> factorize(u64 n);

std::vector<u64> distinct_primes(u64 n);
u64 radical(u64 n);

// Smallest-prime-factor table for bulk factorization of 1..limit.
class SmallestFactorSieve {
 public:
  explicit SmallestFactorSieve(u64 limit);

  u64 limit() const { return static_cast<u64>(spf_.size()) - 1; }
  std::vector<PrimePower> factorize(u64 n) const;

 private:
  std::vector<std::uint32_t> spf_;
};

}  // namespace zpell
