#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "zpell/errors.hpp"
#include "zpell/modroots.hpp"

using namespace zpell;

TEST_CASE("roots_of_unity examples") {
  RootsOfUnity r = roots_of_unity(1);
  CHECK(r.rho == 1);
  CHECK(r.residues == std::vector<u64>{0});
  r = roots_of_unity(2);
  CHECK(r.residues == std::vector<u64>{1, 3});
  CHECK(r.rho == 2);
  r = roots_of_unity(6);
  CHECK(r.residues == std::vector<u64>{1, 17, 19, 35});
  CHECK(r.rho == 4);
  CHECK_THROWS_AS(roots_of_unity(0), DomainError);
}

TEST_CASE("CRT construction matches exhaustive scan") {
  for (u64 u = 1; u <= 300; ++u) {
    const RootsOfUnity r = roots_of_unity(u);
    REQUIRE(r.residues == oracle::brute_roots(u));
    REQUIRE(r.rho == r.residues.size());
    REQUIRE(rho_count(u) == r.rho);
    const u64 m = u * u;
    for (const u64 w : r.residues) REQUIRE(std::ranges::binary_search(r.residues, (m - w) % m));
  }
}

TEST_CASE("rho is multiplicative") {
  for (u64 u = 1; u <= 200; ++u)
    for (u64 v = 1; v <= 200; ++v)
      if (oracle::gcd(u, v) == 1) REQUIRE(rho_count(u * v) == rho_count(u) * rho_count(v));
  const auto table = rho_table(5000);
  for (u64 u = 1; u <= 5000; ++u) REQUIRE(table[u] == rho_count(u));
}

TEST_CASE("rho_sum examples") {
  RhoSum s = rho_sum(1);
  CHECK(s.value == 1.0);
  CHECK(s.reference == 0.0);
  s = rho_sum(2);
  CHECK(s.value == 2.0);
  CHECK_THROWS_AS(rho_sum(0), DomainError);
}

TEST_CASE("rho_sum against an exact rational sum") {
  mpq_class exact = 0;
  for (u64 u = 1; u <= 400; ++u) exact += mpq_class(static_cast<unsigned long>(rho_count(u)), static_cast<unsigned long>(u));
  CHECK(rho_sum(400).value == doctest::Approx(exact.get_d()).epsilon(1e-15));
}

TEST_CASE("rho_sum residual stays within 5 log X") {
  for (const u64 X : {1000u, 10000u, 100000u, 1000000u}) {
    const RhoSum s = rho_sum(X, 3);
    const double residual = std::abs(s.value - s.reference);
    MESSAGE("X = " << X << " residual / log X = " << residual / std::log(static_cast<double>(X)));
    CHECK(residual <= 5.0 * std::log(static_cast<double>(X)));
    CHECK(s.value == rho_sum(X, 1).value);
  }
}

TEST_CASE("rho_weighted_sum") {
  CHECK(rho_weighted_sum(1, Alpha::make(1, 4)).value == 1.0);
  CHECK_FALSE(rho_weighted_sum(1, Alpha::make(1, 4)).ratio);
  CHECK(rho_weighted_sum(2, Alpha::make(1, 2)).value == 3.0);
  double lo = 1e300, hi = 0;
  for (const u64 X : {100u, 1000u, 10000u}) {
    const RhoWeightedSum s = rho_weighted_sum(X, Alpha::make(1, 4), 2);
    REQUIRE(s.ratio);
    MESSAGE("X = " << X << " ratio = " << *s.ratio);
    lo = std::min(lo, *s.ratio);
    hi = std::max(hi, *s.ratio);
    CHECK(s.value == rho_weighted_sum(X, Alpha::make(1, 4), 1).value);
  }
  CHECK(hi / lo < 2.0);
}

TEST_CASE("CSV emitters") {
  std::ostringstream table;
  write_rho_table_csv(table, 6);
  CHECK(table.str() == "u,rho\n1,1\n2,2\n3,2\n4,4\n5,2\n6,4\n");
  std::ostringstream sweep;
  const u64 Xs[] = {1, 2};
  write_rho_sweep_csv(sweep, Xs);
  CHECK(sweep.str().starts_with("X,value,reference\n1,1,0\n2,2,"));
}
