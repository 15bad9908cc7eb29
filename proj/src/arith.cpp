#include "zpell/arith.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace zpell {

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  // sqrt of doubles near 2^64 may round past the true root
  while (r > 0 && (r > 0xFFFFFFFFull || r * r > n)) --r;
  while (r < 0xFFFFFFFFull && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

u64 isqrt128(u128 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(u64 n) {
  const u64 r = isqrt(n);
  return r * r == n;
}

u64 gcd(u64 a, u64 b) {
  while (b != 0) {
    const u64 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

u64 inverse_mod(u64 a, u64 m) {
  if (m == 1) return 0;
  __int128 old_r = static_cast<__int128>(a % m), r = m;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    const __int128 q = old_r / r;
    __int128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw std::invalid_argument("inverse_mod: arguments not coprime");
  __int128 inv = old_s % static_cast<__int128>(m);
  if (inv < 0) inv += m;
  return static_cast<u64>(inv);
}

std::vector<PrimePower> factorize(u64 n) {
  std::vector<PrimePower> out;
  if (n < 2) return out;
  auto strip = [&](u64 p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  };
  strip(2);
  strip(3);
  strip(5);
  static constexpr u64 kWheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  u64 p = 7;
  for (std::size_t i = 0; p <= n / p; p += kWheel[i], i = (i + 1) & 7) strip(p);
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::vector<u64> distinct_primes(u64 n) {
  std::vector<u64> ps;
  for (const auto& pp : factorize(n)) ps.push_back(pp.prime);
  return ps;
}

u64 radical(u64 n) {
  u64 r = 1;
  for (const auto& pp : factorize(n)) r *= pp.prime;
  return n == 0 ? 0 : r;
}

SmallestFactorSieve::SmallestFactorSieve(u64 limit) {
  if (limit > std::numeric_limits<std::uint32_t>::max())
    throw std::length_error("SmallestFactorSieve: limit too large");
  spf_.assign(limit + 1, 0);
  for (u64 i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    if (i > limit / i) continue;
    for (u64 j = i * i; j <= limit; j += i)
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
  }
}

std::vector<PrimePower> SmallestFactorSieve::factorize(u64 n) const {
  if (n > limit()) return zpell::factorize(n);
  std::vector<PrimePower> out;
  while (n > 1) {
    const u64 p = spf_[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

}  // namespace zpell
