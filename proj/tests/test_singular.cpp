#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "zpell/errors.hpp"
#include "zpell/singular.hpp"

using namespace zpell;

namespace {

// (1 + 1/(p^2 - 1)) (1 - 1/(p + 1)) over the primes of n, found by trial division
mpq_class direct_product(u64 n) {
  mpq_class r = 1;
  for (u64 p = 2; p <= n; ++p) {
    if (n % p != 0) continue;
    bool prime = true;
    for (u64 d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (!prime) continue;
    const long P = static_cast<long>(p);
    r *= (1 + mpq_class(1, P * P - 1)) * (1 - mpq_class(1, P + 1));
  }
  return r;
}

u64 radical_by_trial(u64 n) {
  u64 r = 1;
  for (u64 p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      r *= p;
      while (n % p == 0) n /= p;
    }
  return n > 1 ? r * n : r;
}

}  // namespace

TEST_CASE("exact values") {
  CHECK(sigma_lower_bound(1) == 1);
  CHECK(sigma_lower_bound(2) == mpq_class(8, 9));
  CHECK(sigma_lower_bound(6) == mpq_class(3, 4));
  CHECK_THROWS_AS(sigma_lower_bound(0), DomainError);
  for (u64 n = 1; n <= 300; ++n) REQUIRE(sigma_lower_bound(n) == direct_product(n));
}

TEST_CASE("depends only on the radical and is multiplicative") {
  for (u64 n = 1; n <= 10000; ++n) REQUIRE(sigma_lower_bound(n) == sigma_lower_bound(radical_by_trial(n)));
  for (u64 m = 1; m <= 100; ++m)
    for (u64 n = 1; n <= 100; ++n)
      if (oracle::gcd(m, n) == 1) REQUIRE(sigma_lower_bound(m * n) == sigma_lower_bound(m) * sigma_lower_bound(n));
}

TEST_CASE("value sits between the two partial products") {
  for (u64 n = 2; n <= 2000; ++n) {
    const mpq_class v = sigma_lower_bound(n);
    REQUIRE(v > 0);
    REQUIRE(v < 1);  // each prime factor contributes p^3 / ((p-1)(p+1)^2) < 1
  }
}

TEST_CASE("floor against log log n") {
  double worst = 1e9;
  u64 at = 0;
  for (u64 n = 100; n <= 1000000; ++n) {
    const double v = sigma_lower_bound(n).get_d() * std::log(std::log(static_cast<double>(n)));
    if (v < worst) worst = v, at = n;
  }
  MESSAGE("min product * log log n = " << worst << " at n = " << at);
  CHECK(worst >= 0.3);
}
