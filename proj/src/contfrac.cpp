#include "zpell/contfrac.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "zpell/errors.hpp"

namespace zpell {

u64 RationalCF::max_quotient() const {
  return quotients.empty() ? 0 : *std::max_element(quotients.begin(), quotients.end());
}

RationalCF cf_of_rational(u64 a, u64 t) {
  if (t == 0) throw DomainError("cf_of_rational: denominator must be positive");
  if (a >= t) throw DomainError("cf_of_rational: numerator must be below the denominator");
  RationalCF cf;
  cf.gcd = gcd(a, t);
  cf.numerator = a / cf.gcd;
  cf.denominator = t / cf.gcd;
  // Euclid on (t, a); the leading quotient is always 0 and is not stored.
  u64 x = cf.denominator, y = cf.numerator;
  while (y != 0) {
    cf.quotients.push_back(x / y);
    const u64 r = x % y;
    x = y;
    y = r;
  }
  return cf;
}

RationalCF cf_alternate(const RationalCF& cf) {
  if (cf.quotients.empty()) throw DomainError("cf_alternate: empty expansion has no alternate");
  RationalCF out = cf;
  auto& qs = out.quotients;
  if (qs.back() >= 2) {
    --qs.back();
    qs.push_back(1);
  } else if (qs.size() >= 2) {
    qs.pop_back();
    ++qs.back();
  } else {
    // [1] is the value 1, outside [0, 1); its other form [0; 0, 1] is not
    // a positive-quotient string.
    throw DomainError("cf_alternate: [1] has no positive-quotient alternate");
  }
  return out;
}

SurdCF cf_of_sqrt(u64 D) {
  if (D == 0) throw DomainError("cf_of_sqrt: D must be positive");
  const u64 a0 = isqrt(D);
  if (a0 * a0 == D) throw SquareDiscriminant("cf_of_sqrt: " + std::to_string(D) + " is a perfect square");
  SurdCF out{D, a0, {}};
  // sqrt(D) complete quotients (P + sqrt D)/Q with 0 <= P < sqrt D, 0 < Q < 2 sqrt D.
  u64 P = 0, Q = 1, a = a0;
  do {
    P = a * Q - P;
    Q = (D - P * P) / Q;
    a = (a0 + P) / Q;
    out.period.push_back(a);
  } while (a != 2 * a0);
  return out;
}

std::vector<Convergent> convergents(std::span<const u64> quotients) {
  std::vector<Convergent> out;
  out.reserve(quotients.size());
  u128 p_prev = 1, q_prev = 0, p = 0, q = 1;
  constexpr u128 kMax = ~u64{0};
  for (const u64 a : quotients) {
    const u128 np = static_cast<u128>(a) * p + p_prev;
    const u128 nq = static_cast<u128>(a) * q + q_prev;
    if (np > kMax || nq > kMax) throw std::overflow_error("convergents: continuant exceeds 64 bits");
    p_prev = p;
    q_prev = q;
    p = np;
    q = nq;
    out.push_back({static_cast<u64>(p), static_cast<u64>(q)});
  }
  return out;
}

Convergent reconstruct(std::span<const u64> quotients) {
  if (quotients.empty()) return {0, 1};
  return convergents(quotients).back();
}

}  // namespace zpell
