#include "zpell/census.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "zpell/errors.hpp"
#include "zpell/modroots.hpp"
#include "zpell/parallel.hpp"
#include "zpell/version.hpp"

namespace zpell {

namespace {

constexpr u64 kDiscriminantBlock = 4096;
constexpr u64 kModulusBlock = 16;

void require_alpha(Alpha alpha) {
  if (alpha.num == 0 || 2 * alpha.num > alpha.den) throw DomainError("census: alpha must lie in (0, 1/2]");
}

mpz_class mpz_pow(u64 base, u64 exp) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
  return out;
}

u64 mpz_to_u64(const mpz_class& z) {
  if (!z.fits_ulong_p()) throw std::overflow_error("value exceeds 64 bits");
  return z.get_ui();
}

// floor(y^(1/k)) for an exact integer y.
mpz_class floor_root(const mpz_class& y, u64 k) {
  mpz_class r;
  mpz_root(r.get_mpz_t(), y.get_mpz_t(), k);
  return r;
}

// Largest u with u < x^alpha, i.e. u^den < x^num.
u64 largest_u_below(u64 x, Alpha alpha) {
  const mpz_class power = mpz_pow(x, alpha.num);
  mpz_class r = floor_root(power, alpha.den);
  mpz_class check;
  mpz_pow_ui(check.get_mpz_t(), r.get_mpz_t(), alpha.den);
  if (check == power) r -= 1;
  return mpz_to_u64(r);
}

std::optional<bool> sieve_lookup(std::span<const ZarembaSieve> sieves, unsigned A, u64 t) {
  for (const auto& s : sieves)
    if (s.A() == A && s.N() >= t) return s.contains(t);
  return std::nullopt;
}

ZFlag z_flag(std::span<const ZarembaSieve> sieves, unsigned A, u64 t) {
  ZFlag flag{A, false, std::nullopt};
  if (const auto hit = sieve_lookup(sieves, A, t); hit && !*hit) return flag;
  flag.witness = is_in_Z(t, A);
  flag.in_Z = flag.witness.has_value();
  return flag;
}

}  // namespace

double hooley_reference(u64 x, Alpha alpha) {
  const double a = alpha.value();
  const double lx = std::log(static_cast<double>(x));
  return 4.0 * a * a / (std::numbers::pi * std::numbers::pi) * std::sqrt(static_cast<double>(x)) * lx * lx;
}

CensusReport hooley_count_direct(u64 x, Alpha alpha, const CensusOptions& options) {
  require_alpha(alpha);
  CensusReport report;
  report.x = x;
  report.alpha = alpha;
  const auto blocks = fixed_blocks(2, std::max<u64>(x, 2), kDiscriminantBlock);
  std::vector<std::vector<CensusRecord>> parts(blocks.size());
  const PellTable* cache = (options.pell_cache && options.pell_cache->x >= x) ? options.pell_cache : nullptr;
  parallel_for(blocks.size(), options.threads, [&](std::size_t b) {
    for (u64 D = blocks[b].lo; D <= blocks[b].hi && D <= x; ++D) {
      if (is_square(D)) continue;
      // a qualifying unit has t < eps <= D^(1/2 + alpha) <= D
      std::optional<PellSolution> sol;
      if (cache) {
        if (const PellSolution* row = cache->find(D)) sol = *row;
      } else {
        sol = fundamental_solution_bounded(D, D);
      }
      if (sol && qualifies(*sol, alpha)) parts[b].push_back(CensusRecord{D, sol->t, sol->u, true, {}});
    }
  });
  for (auto& part : parts) std::move(part.begin(), part.end(), std::back_inserter(report.records));
  report.count_hooley = report.records.size();
  report.reference = hooley_reference(x, alpha);
  report.ratio = report.reference > 0 ? static_cast<double>(report.count_hooley) / report.reference : 0.0;
  return report;
}

std::vector<u64> hooley_discriminants_parametrized(u64 x, Alpha alpha, const CensusOptions& options) {
  require_alpha(alpha);
  if (x < 2) return {};
  // t + u sqrt(D) <= D^(1/2 + alpha) forces u < D^alpha <= x^alpha
  const u64 u_max = largest_u_below(x, alpha);
  const auto blocks = fixed_blocks(1, std::max<u64>(u_max, 1), kModulusBlock);
  std::vector<std::vector<u64>> parts(blocks.size());
  parallel_for(blocks.size(), options.threads, [&](std::size_t b) {
    for (u64 u = blocks[b].lo; u <= blocks[b].hi && u <= u_max; ++u) {
      const u64 m = u * u;
      const u64 t_max = isqrt128(static_cast<u128>(x) * m + 1);
      for (const u64 omega : roots_of_unity(u).residues) {
        u64 t = omega;
        while (t < 2) t += m;
        for (; t <= t_max; t += m) {
          const u128 t2m1 = static_cast<u128>(t) * t - 1;
          const u64 D = static_cast<u64>(t2m1 / m);
          // t < D  <=>  t u^2 < t^2 - 1
          if (static_cast<u128>(t) * m >= t2m1) continue;
          if (qualifies(D, t, u, alpha)) parts[b].push_back(D);
        }
      }
    }
  });
  std::vector<u64> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  std::sort(out.begin(), out.end());
  return out;
}

u64 hooley_count_parametrized(u64 x, Alpha alpha, const CensusOptions& options) {
  return hooley_discriminants_parametrized(x, alpha, options).size();
}

u64 hooley_count_literal(u64 x, Alpha alpha, std::optional<unsigned> A, const CensusOptions& options) {
  require_alpha(alpha);
  // u <= X = x^alpha / 2  <=>  2u <= floor(x^alpha)
  const u64 u_max = mpz_to_u64(floor_root(mpz_pow(x, alpha.num), alpha.den)) / 2;
  if (u_max == 0) return 0;
  const auto blocks = fixed_blocks(1, u_max, kModulusBlock);
  std::vector<u64> partial(blocks.size(), 0);
  parallel_for(blocks.size(), options.threads, [&](std::size_t b) {
    u64 count = 0;
    for (u64 u = blocks[b].lo; u <= blocks[b].hi; ++u) {
      const u64 m = u * u;
      // t^(2 num) > u^(2 num + den)  and  t^2 < u^2 x
      const u64 t_lo = mpz_to_u64(floor_root(mpz_pow(u, 2 * alpha.num + alpha.den), 2 * alpha.num)) + 1;
      const u64 t_hi = isqrt128(static_cast<u128>(m) * x - 1);
      if (t_lo > t_hi) continue;
      for (const u64 omega : roots_of_unity(u).residues) {
        // first t >= t_lo with t = omega (mod m)
        const u64 first = t_lo + (omega + m - t_lo % m) % m;
        if (first > t_hi) continue;
        if (!A) {
          count += (t_hi - first) / m + 1;
          continue;
        }
        for (u64 t = first; t <= t_hi; t += m) {
          const auto hit = sieve_lookup(options.sieves, *A, t);
          if (hit ? *hit : is_in_Z(t, *A).has_value()) ++count;
        }
      }
    }
    partial[b] = count;
  });
  u64 total = 0;
  for (const u64 c : partial) total += c;
  return total;
}

CensusReport census_with_Z(u64 x, Alpha alpha, std::span<const unsigned> A_values, const CensusOptions& options) {
  CensusReport report = hooley_count_direct(x, alpha, options);
  report.A_values.assign(A_values.begin(), A_values.end());
  parallel_for(report.records.size(), options.threads, [&](std::size_t i) {
    CensusRecord& rec = report.records[i];
    const u64 t = mpz_to_u64(rec.t);
    for (const unsigned A : A_values) rec.z.push_back(z_flag(options.sieves, A, t));
  });
  for (std::size_t k = 0; k < A_values.size(); ++k) {
    ZCount zc;
    zc.A = A_values[k];
    for (const auto& rec : report.records) zc.count_with_Z += rec.z[k].in_Z ? 1 : 0;
    zc.ratio = report.reference > 0 ? static_cast<double>(zc.count_with_Z) / report.reference : 0.0;
    zc.fraction = report.count_hooley > 0
                      ? static_cast<double>(zc.count_with_Z) / static_cast<double>(report.count_hooley)
                      : 0.0;
    report.z_counts.push_back(zc);
  }
  return report;
}

u64 progression_discrepancy(const ZarembaSieve& sieve, u64 u, u64 xi) {
  if (u == 0) throw DomainError("progression_discrepancy: u must be positive");
  const u64 m = u * u;
  if (m > sieve.N()) throw DomainError("progression_discrepancy: u^2 exceeds the sieve range");
  u64 count = 0;
  for (u64 n = xi == 0 ? m : xi; n <= sieve.N(); n += m)
    if (!sieve.contains(n)) ++count;
  return count;
}

WorstClass max_progression_discrepancy(const ZarembaSieve& sieve, u64 u) {
  if (u == 0) throw DomainError("max_progression_discrepancy: u must be positive");
  const u64 m = u * u;
  if (m > sieve.N()) throw DomainError("max_progression_discrepancy: u^2 exceeds the sieve range");
  std::vector<u64> per_class(m, 0);
  for (u64 n = 1; n <= sieve.N(); ++n)
    if (!sieve.contains(n)) ++per_class[n % m];
  const auto it = std::max_element(per_class.begin(), per_class.end());
  return {static_cast<u64>(it - per_class.begin()), *it};
}

double dyadic_discrepancy_ratio(const ZarembaSieve& sieve, u64 D) {
  if (D == 0) throw DomainError("dyadic_discrepancy_ratio: D must be positive");
  u64 total = 0;
  for (u64 u = D; u < 2 * D; ++u) total += max_progression_discrepancy(sieve, u).count;
  return static_cast<double>(total) * static_cast<double>(D) / static_cast<double>(sieve.N());
}

void write_census_csv(std::ostream& out, const CensusReport& report) {
  out << "D,t,u,qualifies,A,in_Z,witness_a,witness_quotients\n";
  for (const auto& rec : report.records) {
    const std::string head = std::to_string(rec.D) + ',' + rec.t.get_str() + ',' + rec.u.get_str() + ',' +
                             (rec.qualifies ? "true" : "false") + ',';
    if (rec.z.empty()) {
      out << head << ",,,\n";
      continue;
    }
    for (const auto& flag : rec.z) {
      out << head << flag.A << ',' << (flag.in_Z ? "true" : "false") << ',';
      if (flag.witness) {
        out << flag.witness->a << ',';
        for (std::size_t i = 0; i < flag.witness->quotients.size(); ++i)
          out << (i ? "-" : "") << flag.witness->quotients[i];
      } else {
        out << ',';
      }
      out << '\n';
    }
  }
}

std::string census_json(const CensusReport& report, std::optional<u64> count_parametrized) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["command"] = "census";
  j["parameters"] = {{"x", report.x}, {"alpha", report.alpha.str()}, {"A", report.A_values}};
  j["count_hooley"] = report.count_hooley;
  if (count_parametrized) {
    j["count_parametrized"] = *count_parametrized;
    j["methods_agree"] = *count_parametrized == report.count_hooley;
  }
  j["reference"] = report.reference;
  j["ratio"] = report.ratio;
  auto zs = nlohmann::ordered_json::array();
  for (const auto& zc : report.z_counts)
    zs.push_back({{"A", zc.A}, {"count_with_Z", zc.count_with_Z}, {"ratio", zc.ratio}, {"fraction", zc.fraction}});
  j["with_Z"] = zs;
  if (report.z_counts.size() == 1) j["count_with_Z"] = report.z_counts.front().count_with_Z;
  return j.dump(2) + "\n";
}

}  // namespace zpell
