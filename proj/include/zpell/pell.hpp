#pragma once

#include <gmpxx.h>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zpell/arith.hpp"

namespace zpell {

/// Exact rational exponent p/q in lowest terms with p, q >= 1.
struct Alpha {
  u64 num = 1;
  u64 den = 2;

  /// Parses "p/q" (or a bare integer). Throws DomainError on malformed text,
  /// zero denominator or a non-positive value.
  static Alpha parse(std::string_view text);
  static Alpha make(u64 num, u64 den);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  friend bool operator==(const Alpha&, const Alpha&) = default;
};

/// t^2 - D u^2 = 1 with (t, u) the minimal positive solution.
struct PellSolution {
  u64 D = 0;
  mpz_class t;
  mpz_class u;
};

PellSolution fundamental_solution(u64 D);

/// The fundamental solution when t <= t_limit, nothing otherwise. Works in
/// machine integers and abandons the period walk as soon as a convergent
/// numerator exceeds the limit. Requires t_limit < 2^62.
std::optional<PellSolution> fundamental_solution_bounded(u64 D, u64 t_limit);

/// First t in [2, t_max] with (t^2 - 1)/D a perfect square.
std::optional<PellSolution> pell_brute_oracle(u64 D, u64 t_max);

/// Exact decision of t + u sqrt(D) <= D^(1/2 + alpha).
bool qualifies(const PellSolution& sol, Alpha alpha);
bool qualifies(u64 D, u64 t, u64 u, Alpha alpha);

/// Exact check of t + u sqrt(D) >= 2 sqrt(D).
bool unit_at_least_two_sqrt(const PellSolution& sol);

/// (t, u) -> (t^2 + D u^2, 2 t u), the square of the unit.
PellSolution square_unit(const PellSolution& sol);

/// Holds t^2 - D u^2 = 1 exactly.
bool satisfies_pell(const PellSolution& sol);

struct PellTable {
  u64 x = 0;
  std::vector<PellSolution> rows;  // every nonsquare D <= x, ascending

  const PellSolution* find(u64 D) const;
};

PellTable build_pell_table(u64 x, unsigned threads = 1);

/// "PLT1" cache file. read_pell_table throws CacheCorrupt on any structural
/// inconsistency.
void write_pell_table(const std::filesystem::path& path, const PellTable& table);
PellTable read_pell_table(const std::filesystem::path& path);

}  // namespace zpell
