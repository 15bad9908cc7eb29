#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "zpell/arith.hpp"
#include "zpell/pell.hpp"

namespace zpell {

/// Residues Omega mod u^2 with Omega^2 = 1 (mod u^2).
struct RootsOfUnity {
  u64 u = 1;
  std::vector<u64> residues;  // ascending, in [0, u^2)
  u64 rho = 1;
};

/// Local solutions mod p^(2e) combined by CRT. Requires u < 2^32.
RootsOfUnity roots_of_unity(u64 u);
RootsOfUnity roots_of_unity(u64 u, std::span<const PrimePower> factors);

/// rho(u) from the factorization alone.
u64 rho_count(std::span<const PrimePower> factors);
u64 rho_count(u64 u);

/// rho(u) for u = 0..X (entry 0 unused).
std::vector<u64> rho_table(u64 X);

struct RhoSum {
  double value;      // sum_{u <= X} rho(u)/u
  double reference;  // (4/pi^2) (log X)^2
};

/// Terms are accumulated as 64.64 fixed-point integers (each truncated by
/// less than 2^-64), so the total is independent of how the range is split.
RhoSum rho_sum(u64 X, unsigned threads = 1);

struct RhoWeightedSum {
  double value;                 // sum_{u <= X} rho(u) u^(1/(2 alpha) - 1)
  std::optional<double> ratio;  // value / (X^(1/(2 alpha)) log X); empty at X = 1
};

RhoWeightedSum rho_weighted_sum(u64 X, Alpha alpha, unsigned threads = 1);

void write_rho_table_csv(std::ostream& out, u64 X);
void write_rho_sweep_csv(std::ostream& out, std::span<const u64> Xs, unsigned threads = 1);

}  // namespace zpell
