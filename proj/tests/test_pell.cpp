#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>

#include "oracles.hpp"
#include "zpell/contfrac.hpp"
#include "zpell/errors.hpp"
#include "zpell/pell.hpp"

using namespace zpell;
namespace fs = std::filesystem;

namespace {

mpz_class Z(u64 v) { return mpz_class(static_cast<unsigned long>(v)); }

bool nonsquare(u64 D) {
  const u64 s = isqrt(D);
  return s * s != D;
}

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "zpell_test_pell";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("fundamental_solution examples") {
  PellSolution s = fundamental_solution(2);
  CHECK(s.t == 3);
  CHECK(s.u == 2);
  s = fundamental_solution(5);
  CHECK(s.t == 9);
  CHECK(s.u == 4);
  CHECK(oracle::smallest_pell(5, 100) == std::make_pair<u64, u64>(9, 4));

  s = fundamental_solution(61);
  CHECK(s.t == Z(1766319049));
  CHECK(s.u == Z(226153980));
  CHECK(satisfies_pell(s));
  // minimality: no earlier convergent of sqrt 61 solves the equation
  const SurdCF cf = cf_of_sqrt(61);
  mpz_class pp = 1, qp = 0, pc = Z(cf.a0), qc = 1;
  for (std::size_t i = 0; pc < s.t; ++i) {
    CHECK(pc * pc - 61 * qc * qc != 1);
    const mpz_class a = Z(cf.period[i % cf.period.size()]);
    mpz_class np = a * pc + pp, nq = a * qc + qp;
    pp = pc, qp = qc, pc = np, qc = nq;
  }

  CHECK_THROWS_AS(fundamental_solution(9), SquareDiscriminant);
  CHECK_THROWS_AS(fundamental_solution(1), SquareDiscriminant);
}

TEST_CASE("pell_brute_oracle examples") {
  auto r = pell_brute_oracle(2, 10);
  REQUIRE(r);
  CHECK(r->t == 3);
  CHECK(r->u == 2);
  CHECK_FALSE(pell_brute_oracle(61, 1000000));
  r = pell_brute_oracle(8, 10);
  REQUIRE(r);
  CHECK(r->t == 3);
  CHECK(r->u == 1);
}

TEST_CASE("qualifies examples") {
  const PellSolution eight{8, 3, 1};
  const PellSolution two{2, 3, 2};
  CHECK(qualifies(eight, Alpha::make(1, 2)));
  CHECK_FALSE(qualifies(two, Alpha::make(1, 2)));
  CHECK(qualifies(8, 3, 1, Alpha::make(1, 2)));
  CHECK_FALSE(qualifies(2, 3, 2, Alpha::make(1, 2)));
}

TEST_CASE("qualifies is monotone in alpha and matches the binomial oracle") {
  const u64 dens[] = {2, 3, 4, 5, 7, 10, 20};
  for (u64 D = 2; D <= 400; ++D) {
    if (!nonsquare(D)) continue;
    const PellSolution s = fundamental_solution(D);
    if (mpz_sizeinbase(s.t.get_mpz_t(), 2) > 200) continue;
    for (const u64 den : dens) {
      bool prev = false;
      for (u64 num = 1; 2 * num <= den; ++num) {
        const bool q = qualifies(s, Alpha::make(num, den));
        if (std::gcd(num, den) == 1) {
          REQUIRE(q == oracle::qualifies_binomial(D, s.t, s.u, num, den));
          REQUIRE((!prev || q));
          prev = q;
        }
      }
    }
  }
}

TEST_CASE("qualifies near the boundary") {
  // (3 + sqrt 8)^2 = 17 + 6 sqrt 8 ~ 33.97, so the threshold alpha solves 8^(1/2 + alpha) = 5.828...
  // which is alpha ~ 0.3478; bracket it with close rationals
  CHECK_FALSE(qualifies(PellSolution{8, 3, 1}, Alpha::make(347, 1000)));
  CHECK(qualifies(PellSolution{8, 3, 1}, Alpha::make(348, 1000)));
  CHECK(oracle::qualifies_binomial(8, 3, 1, 348, 1000));
  CHECK_FALSE(oracle::qualifies_binomial(8, 3, 1, 347, 1000));

  // the u64 overload agrees with the big-integer one
  for (u64 D = 2; D <= 3000; ++D) {
    if (!nonsquare(D)) continue;
    const auto b = fundamental_solution_bounded(D, D);
    if (!b) continue;
    for (const Alpha a : {Alpha::make(1, 10), Alpha::make(1, 4), Alpha::make(9, 20), Alpha::make(1, 2)})
      REQUIRE(qualifies(D, b->t.get_ui(), b->u.get_ui(), a) == qualifies(*b, a));
  }
}

TEST_CASE("solver agrees with brute force and the t < D criterion") {
  for (u64 D = 2; D <= 2000; ++D) {
    if (!nonsquare(D)) continue;
    const PellSolution s = fundamental_solution(D);
    REQUIRE(satisfies_pell(s));
    REQUIRE(unit_at_least_two_sqrt(s));
    const auto brute = oracle::smallest_pell(D, D);
    if (brute) {
      // a solution with t < D is necessarily fundamental
      REQUIRE(s.t == Z(brute->first));
      REQUIRE(s.u == Z(brute->second));
    }
    const auto bounded = fundamental_solution_bounded(D, D);
    REQUIRE(bounded.has_value() == (s.t <= Z(D)));
    if (bounded) REQUIRE(bounded->t == s.t);
    const PellSolution sq = square_unit(s);
    REQUIRE(satisfies_pell(sq));
    REQUIRE(sq.t > s.t);
  }
}

TEST_CASE("unit is at least 2 sqrt D") {
  for (u64 D = 2; D <= 10000; ++D)
    if (nonsquare(D)) REQUIRE(unit_at_least_two_sqrt(fundamental_solution(D)));
  // a non-solution below the bound is rejected
  CHECK_FALSE(unit_at_least_two_sqrt(PellSolution{100003, 1, 0}));
}

TEST_CASE("Alpha parsing") {
  CHECK(Alpha::parse("9/20") == Alpha::make(9, 20));
  CHECK(Alpha::parse("2/4") == Alpha::make(1, 2));
  CHECK(Alpha::parse("2/4").str() == "1/2");
  CHECK(Alpha::parse("1").num == 1);
  CHECK_THROWS_AS(Alpha::parse("1/0"), DomainError);
  CHECK_THROWS_AS(Alpha::parse("0/3"), DomainError);
  CHECK_THROWS_AS(Alpha::parse("abc"), DomainError);
  CHECK_THROWS_AS(Alpha::parse("1/2x"), DomainError);
  CHECK_THROWS_AS(Alpha::parse("-1/2"), DomainError);
  CHECK_THROWS_AS(Alpha::parse(""), DomainError);
}

TEST_CASE("PLT1 round trip") {
  const PellTable table = build_pell_table(300, 3);
  CHECK(table.rows.size() == 299 - 16);  // squares 4..289 are skipped
  const fs::path p = scratch("t.plt1");
  write_pell_table(p, table);
  const PellTable back = read_pell_table(p);
  CHECK(back.x == 300);
  REQUIRE(back.rows.size() == table.rows.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    CHECK(back.rows[i].D == table.rows[i].D);
    CHECK(back.rows[i].t == table.rows[i].t);
    CHECK(back.rows[i].u == table.rows[i].u);
  }
  REQUIRE(back.find(61));
  CHECK(back.find(61)->t == Z(1766319049));
  CHECK(back.find(64) == nullptr);
  CHECK(build_pell_table(300, 1).rows.size() == table.rows.size());
}

TEST_CASE("PLT1 corruption is detected") {
  const fs::path p = scratch("c.plt1");
  write_pell_table(p, build_pell_table(50));
  std::string bytes;
  {
    std::ifstream in(p, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto write = [&](const std::string& b) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << b;
  };

  std::string bad = bytes;
  bad[0] = 'X';
  write(bad);
  CHECK_THROWS_AS(read_pell_table(p), CacheCorrupt);

  write(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_pell_table(p), CacheCorrupt);

  write(bytes + "junk");
  CHECK_THROWS_AS(read_pell_table(p), CacheCorrupt);

  // flip a byte of the last u: identity no longer holds
  bad = bytes;
  bad[bad.size() - 1] ^= 0x01;
  write(bad);
  CHECK_THROWS_AS(read_pell_table(p), CacheCorrupt);

  write(bytes);
  CHECK_NOTHROW(read_pell_table(p));
  CHECK_THROWS_AS(read_pell_table(scratch("missing.plt1")), CacheCorrupt);
}
