#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <vector>

#include "zpell/arith.hpp"
#include "zpell/zaremba.hpp"

namespace zpell {

/// theta_hat(j/M) = sum_n theta(n) e(n j / M) for j = 0..M-1. M must be a
/// power of two with M >= 2N.
std::vector<std::complex<double>> theta_hat_grid(const ThetaMeasure& measure, std::size_t M);

struct ArcHit {
  u64 q = 1;
  u64 a = 0;
  u64 K = 1;  // shell K/2 < N |alpha - a/q| <= K; K = 1 means <= 1
  friend bool operator==(const ArcHit&, const ArcHit&) = default;
};

/// Smallest q <= q_max having a reduced a/q with N |alpha - a/q| <= K_max
/// (distance on the circle), nearest a on ties.
std::optional<ArcHit> classify_arc(double alpha, u64 N, u64 q_max, u64 K_max);
/// Same for the exact point alpha = num/den, den <= 2^62.
std::optional<ArcHit> classify_arc(u64 num, u64 den, u64 N, u64 q_max, u64 K_max);

struct ArcMasses {
  double major = 0.0;
  double minor = 0.0;
  double total() const { return major + minor; }
  double minor_fraction() const { return total() > 0 ? minor / total() : 0.0; }
};

/// Grid quadrature (1/M) sum_j |theta_hat(j/M)|^2 split by arc membership.
ArcMasses minor_arc_mass(const ThetaMeasure& measure, u64 q_max, u64 K_max, std::size_t M, unsigned threads = 1);
ArcMasses minor_arc_mass(const std::vector<std::complex<double>>& grid, u64 N, u64 q_max, u64 K_max,
                         unsigned threads = 1);

struct ArcRow {
  u64 q = 1;
  u64 K = 1;
  double max_abs = 0.0;
  double reference = 0.0;  // N / (K q)
  u64 samples = 0;
};

struct ArcProfile {
  std::vector<ArcRow> rows;  // ascending (q, K); empty shells omitted
  double slope = 0.0;        // least-squares slope of log max_abs against log(K q)
};

ArcProfile arc_decay_profile(const ThetaMeasure& measure, u64 q_max, u64 K_max, std::size_t M, unsigned threads = 1);
ArcProfile arc_decay_profile(const std::vector<std::complex<double>>& grid, u64 N, u64 q_max, u64 K_max,
                             unsigned threads = 1);

void write_arc_profile_csv(std::ostream& out, const ArcProfile& profile);
void write_mass_table_csv(std::ostream& out, u64 N, unsigned A, u64 q_max, u64 K_max, std::size_t M,
                          const ArcMasses& masses);

}  // namespace zpell
