#include "zpell/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "zpell/errors.hpp"
#include "zpell/parallel.hpp"

namespace zpell {

namespace {

constexpr std::size_t kGridBlock = 4096;
constexpr unsigned kDoubleShift = 60;

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

void check_dyadic(u64 K_max) {
  if (K_max == 0 || !std::has_single_bit(K_max)) throw DomainError("K_max must be a power of two");
}

}  // namespace

std::vector<std::complex<double>> theta_hat_grid(const ThetaMeasure& measure, std::size_t M) {
  if (M == 0 || !std::has_single_bit(M)) throw DomainError("theta_hat_grid: grid size must be a power of two");
  if (M < measure.N || M / 2 < measure.N) throw DomainError("theta_hat_grid: grid size must be at least 2N");
  std::unique_ptr<fftw_complex[], FftwFree> buf(fftw_alloc_complex(M));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(M), buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (std::size_t n = 0; n < M; ++n) {
    buf[n][0] = n < measure.weights.size() ? measure.weights[n] : 0.0;
    buf[n][1] = 0.0;
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<std::complex<double>> out(M);
  for (std::size_t j = 0; j < M; ++j) out[j] = {buf[j][0], buf[j][1]};
  return out;
}

std::optional<ArcHit> classify_arc(u64 num, u64 den, u64 N, u64 q_max, u64 K_max) {
  if (den == 0 || den > (u64{1} << 62) || num >= den) throw DomainError("classify_arc: need 0 <= num < den <= 2^62");
  if (N == 0) throw DomainError("classify_arc: N must be positive");
  if (q_max >= (u64{1} << 20) || N >= (u64{1} << 40) || K_max >= (u64{1} << 40))
    throw DomainError("classify_arc: parameters exceed the exact-arithmetic range");
  for (u64 q = 1; q <= q_max; ++q) {
    const u128 scaled = static_cast<u128>(num) * q;  // alpha q, times den
    const u64 a_floor = static_cast<u64>(scaled / den);
    std::optional<u64> best_a;
    u128 best_dist = 0;
    for (u64 a = a_floor >= 1 ? a_floor - 1 : 0; a <= std::min(a_floor + 2, q); ++a) {
      if (gcd(a % q, q) != 1) continue;
      const u128 target = static_cast<u128>(a) * den;
      const u128 dist = scaled > target ? scaled - target : target - scaled;  // |alpha - a/q| q den
      if (!best_a || dist < best_dist) {
        best_a = a;
        best_dist = dist;
      }
    }
    if (!best_a) continue;
    const u128 unit = static_cast<u128>(q) * den;  // N |alpha - a/q| <= K  <=>  N dist <= K unit
    const u128 lhs = best_dist * N;
    if (lhs > static_cast<u128>(K_max) * unit) continue;
    u64 K = 1;
    while (lhs > static_cast<u128>(K) * unit) K *= 2;
    return ArcHit{q, *best_a % q, K};
  }
  return std::nullopt;
}

std::optional<ArcHit> classify_arc(double alpha, u64 N, u64 q_max, u64 K_max) {
  if (!std::isfinite(alpha)) throw DomainError("classify_arc: alpha must be finite");
  const long double frac = static_cast<long double>(alpha) - std::floor(static_cast<long double>(alpha));
  const u64 den = u64{1} << kDoubleShift;
  u64 num = static_cast<u64>(std::llround(std::ldexp(frac, kDoubleShift)));
  if (num >= den) num -= den;
  return classify_arc(num, den, N, q_max, K_max);
}

ArcMasses minor_arc_mass(const std::vector<std::complex<double>>& grid, u64 N, u64 q_max, u64 K_max,
                         unsigned threads) {
  const std::size_t M = grid.size();
  if (M == 0) return {};
  const auto blocks = fixed_blocks(0, M - 1, kGridBlock);
  std::vector<ArcMasses> partial(blocks.size());
  parallel_for(blocks.size(), threads, [&](std::size_t b) {
    ArcMasses local;
    for (u64 j = blocks[b].lo; j <= blocks[b].hi; ++j) {
      const double w = std::norm(grid[j]) / static_cast<double>(M);
      if (classify_arc(j, M, N, q_max, K_max)) local.major += w;
      else local.minor += w;
    }
    partial[b] = local;
  });
  ArcMasses out;
  for (const auto& p : partial) {
    out.major += p.major;
    out.minor += p.minor;
  }
  return out;
}

ArcMasses minor_arc_mass(const ThetaMeasure& measure, u64 q_max, u64 K_max, std::size_t M, unsigned threads) {
  check_dyadic(K_max);
  return minor_arc_mass(theta_hat_grid(measure, M), measure.N, q_max, K_max, threads);
}

ArcProfile arc_decay_profile(const std::vector<std::complex<double>>& grid, u64 N, u64 q_max, u64 K_max,
                             unsigned threads) {
  using Shell = std::pair<u64, u64>;
  const std::size_t M = grid.size();
  ArcProfile profile;
  if (M == 0) return profile;
  const auto blocks = fixed_blocks(0, M - 1, kGridBlock);
  std::vector<std::map<Shell, ArcRow>> partial(blocks.size());
  parallel_for(blocks.size(), threads, [&](std::size_t b) {
    auto& rows = partial[b];
    for (u64 j = blocks[b].lo; j <= blocks[b].hi; ++j) {
      const auto hit = classify_arc(j, M, N, q_max, K_max);
      if (!hit) continue;
      ArcRow& row = rows[{hit->q, hit->K}];
      row.q = hit->q;
      row.K = hit->K;
      row.max_abs = std::max(row.max_abs, std::abs(grid[j]));
      ++row.samples;
    }
  });
  std::map<Shell, ArcRow> merged;
  for (const auto& rows : partial)
    for (const auto& [key, row] : rows) {
      ArcRow& m = merged[key];
      m.q = row.q;
      m.K = row.K;
      m.max_abs = std::max(m.max_abs, row.max_abs);
      m.samples += row.samples;
    }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (auto& [key, row] : merged) {
    row.reference = static_cast<double>(N) / static_cast<double>(row.K * row.q);
    profile.rows.push_back(row);
    if (row.max_abs <= 0.0) continue;
    const double x = std::log(static_cast<double>(row.K * row.q));
    const double y = std::log(row.max_abs);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  if (n >= 2 && denom > 0) profile.slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
  return profile;
}

ArcProfile arc_decay_profile(const ThetaMeasure& measure, u64 q_max, u64 K_max, std::size_t M, unsigned threads) {
  check_dyadic(K_max);
  return arc_decay_profile(theta_hat_grid(measure, M), measure.N, q_max, K_max, threads);
}

void write_arc_profile_csv(std::ostream& out, const ArcProfile& profile) {
  const auto old_precision = out.precision(17);
  out << "q,K,max_abs,reference,samples\n";
  for (const auto& r : profile.rows) out << r.q << ',' << r.K << ',' << r.max_abs << ',' << r.reference << ',' << r.samples << '\n';
  out.precision(old_precision);
}

void write_mass_table_csv(std::ostream& out, u64 N, unsigned A, u64 q_max, u64 K_max, std::size_t M,
                          const ArcMasses& masses) {
  const auto old_precision = out.precision(17);
  out << "N,A,q_max,K_max,M,major,minor,total,minor_fraction\n";
  out << N << ',' << A << ',' << q_max << ',' << K_max << ',' << M << ',' << masses.major << ',' << masses.minor
      << ',' << masses.total() << ',' << masses.minor_fraction() << '\n';
  out.precision(old_precision);
}

}  // namespace zpell
