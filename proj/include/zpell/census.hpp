#pragma once

#include <gmpxx.h>

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "zpell/arith.hpp"
#include "zpell/pell.hpp"
#include "zpell/zaremba.hpp"

namespace zpell {

struct ZFlag {
  unsigned A = 1;
  bool in_Z = false;
  std::optional<ZarembaWitness> witness;
};

/// One discriminant counted by the census (its fundamental unit qualifies).
struct CensusRecord {
  u64 D = 0;
  mpz_class t;
  mpz_class u;
  bool qualifies = true;
  std::vector<ZFlag> z;  // one entry per queried A, in query order
};

struct ZCount {
  unsigned A = 1;
  u64 count_with_Z = 0;
  double ratio = 0.0;     // count_with_Z / reference
  double fraction = 0.0;  // count_with_Z / count_hooley
};

struct CensusReport {
  u64 x = 0;
  Alpha alpha;
  std::vector<unsigned> A_values;
  u64 count_hooley = 0;
  double reference = 0.0;  // (4 alpha^2 / pi^2) sqrt(x) (log x)^2
  double ratio = 0.0;      // count_hooley / reference
  std::vector<ZCount> z_counts;
  std::vector<CensusRecord> records;  // ascending D
};

struct CensusOptions {
  unsigned threads = 1;
  // Optional precomputed inputs; each is used only where it covers the query.
  const PellTable* pell_cache = nullptr;
  std::span<const ZarembaSieve> sieves;
};

double hooley_reference(u64 x, Alpha alpha);

/// Walks every nonsquare D <= x through the continued fraction of sqrt(D).
CensusReport hooley_count_direct(u64 x, Alpha alpha, const CensusOptions& options = {});

/// Discriminants reached from (u, Omega in R(u), t = Omega mod u^2) under the
/// exact conditions D = (t^2 - 1)/u^2 <= x, t < D and t + u sqrt(D) <= D^(1/2 + alpha).
std::vector<u64> hooley_discriminants_parametrized(u64 x, Alpha alpha, const CensusOptions& options = {});
u64 hooley_count_parametrized(u64 x, Alpha alpha, const CensusOptions& options = {});

/// Triples (u, Omega, t) with u <= x^alpha / 2 and u^(1 + 1/(2 alpha)) < t < u sqrt(x),
/// optionally restricted to t in Z(A). A lower bound for the census.
u64 hooley_count_literal(u64 x, Alpha alpha, std::optional<unsigned> A, const CensusOptions& options = {});

CensusReport census_with_Z(u64 x, Alpha alpha, std::span<const unsigned> A_values,
                           const CensusOptions& options = {});

/// #{ n in [1, N] : n = xi + k u^2 for some k >= 0, n not in Z }.
u64 progression_discrepancy(const ZarembaSieve& sieve, u64 u, u64 xi);

struct WorstClass {
  u64 xi = 0;
  u64 count = 0;
};

/// Residue class mod u^2 with the most non-members (smallest xi on ties).
WorstClass max_progression_discrepancy(const ZarembaSieve& sieve, u64 u);

/// sum_{D <= u < 2D} max_xi discrepancy, divided by N/D.
double dyadic_discrepancy_ratio(const ZarembaSieve& sieve, u64 D);

void write_census_csv(std::ostream& out, const CensusReport& report);
/// JSON text, fixed key order; no timestamps or host data.
std::string census_json(const CensusReport& report, std::optional<u64> count_parametrized = std::nullopt);

}  // namespace zpell
