#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <gmpxx.h>

#include <algorithm>
#include <vector>

#include "zpell/contfrac.hpp"
#include "zpell/errors.hpp"

using namespace zpell;
using Q = std::vector<u64>;

TEST_CASE("cf_of_rational examples") {
  CHECK(cf_of_rational(1, 2).quotients == Q{2});
  CHECK(cf_of_rational(0, 5).quotients.empty());
  CHECK(cf_of_rational(0, 5).max_quotient() == 0);
  CHECK(cf_of_rational(2, 5).quotients == Q{2, 2});

  const RationalCF reduced = cf_of_rational(4, 10);
  CHECK(reduced.gcd == 2);
  CHECK(reduced.numerator == 2);
  CHECK(reduced.denominator == 5);
  CHECK(reduced.quotients == Q{2, 2});

  CHECK_THROWS_AS(cf_of_rational(0, 0), DomainError);
  CHECK_THROWS_AS(cf_of_rational(5, 5), DomainError);
}

TEST_CASE("cf_alternate examples") {
  auto alt = [](Q qs) {
    RationalCF cf;
    cf.quotients = std::move(qs);
    return cf_alternate(cf).quotients;
  };
  CHECK(alt({2}) == Q{1, 1});
  CHECK(alt({1, 1}) == Q{2});
  CHECK(alt({2, 2}) == Q{2, 1, 1});
  CHECK(reconstruct(Q{2, 1, 1}) == Convergent{2, 5});
  CHECK_THROWS_AS(alt({}), DomainError);
}

TEST_CASE("cf_of_sqrt examples") {
  const SurdCF two = cf_of_sqrt(2);
  CHECK(two.a0 == 1);
  CHECK(two.period == Q{2});
  const SurdCF thirteen = cf_of_sqrt(13);
  CHECK(thirteen.a0 == 3);
  CHECK(thirteen.period == Q{1, 1, 1, 1, 6});
  CHECK_THROWS_AS(cf_of_sqrt(9), SquareDiscriminant);
}

TEST_CASE("convergents examples") {
  CHECK(convergents(Q{2}) == std::vector<Convergent>{{1, 2}});
  CHECK(convergents(Q{1, 1, 1, 1}) == std::vector<Convergent>{{1, 1}, {1, 2}, {2, 3}, {3, 5}});
  CHECK(convergents(Q{}).empty());
}

TEST_CASE("round trip for every a < t <= 10^4") {
  u64 failures = 0;
  for (u64 t = 1; t <= 10000; ++t)
    for (u64 a = 0; a < t; ++a) {
      const RationalCF cf = cf_of_rational(a, t);
      const Convergent c = reconstruct(cf.quotients);
      if (c.p != a / cf.gcd || c.q != t / cf.gcd || !cf.canonical()) ++failures;
    }
  CHECK(failures == 0);
}

TEST_CASE("alternate expansion is an involution; exactly one form is canonical") {
  for (u64 t = 2; t <= 1500; ++t)
    for (u64 a = 1; a < t; ++a) {
      const RationalCF cf = cf_of_rational(a, t);
      const RationalCF alt = cf_alternate(cf);
      REQUIRE(cf_alternate(alt).quotients == cf.quotients);
      REQUIRE(cf.canonical() != alt.canonical());
      REQUIRE(reconstruct(alt.quotients) == reconstruct(cf.quotients));
    }
}

TEST_CASE("sqrt periods: palindrome, 2 a0 terminator, minimal, convergent") {
  for (u64 D = 2; D <= 10000; ++D) {
    const u64 s = isqrt(D);
    if (s * s == D) continue;
    const SurdCF cf = cf_of_sqrt(D);
    const auto& p = cf.period;
    const std::size_t L = p.size();
    REQUIRE(p.back() == 2 * cf.a0);
    REQUIRE(std::equal(p.begin(), p.end() - 1, p.rbegin() + 1));
    // 2 a0 appears only as the terminator, so no shorter period exists
    REQUIRE(std::count(p.begin(), p.end(), 2 * cf.a0) == 1);

    // [a0; period x3]: p^2 - D q^2 alternates in sign and the gap to sqrt D shrinks
    mpz_class pp = 1, qp = 0, pc = static_cast<unsigned long>(cf.a0), qc = 1;
    int prev_sign = -1;  // a0^2 - D < 0
    for (std::size_t i = 0; i < 3 * L; ++i) {
      const mpz_class a = static_cast<unsigned long>(p[i % L]);
      mpz_class np = a * pc + pp, nq = a * qc + qp;
      pp = pc;
      qp = qc;
      pc = np;
      qc = nq;
      const mpz_class norm = pc * pc - mpz_class(static_cast<unsigned long>(D)) * qc * qc;
      const int sign = sgn(norm);
      REQUIRE(sign == -prev_sign);
      prev_sign = sign;
      // bounded norm with growing q means p/q -> sqrt D
      REQUIRE(abs(norm) <= 2 * cf.a0 + 1);
    }
    REQUIRE(qc > qp);
  }
}
