#include "zpell/modroots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zpell/errors.hpp"
#include "zpell/parallel.hpp"

namespace zpell {

namespace {

constexpr u64 kBlock = 1 << 14;

// Solutions of x^2 = 1 modulo p^k.
std::vector<u64> local_roots(u64 p, unsigned k, u64 modulus) {
  if (p != 2) return {1, modulus - 1};
  if (k == 1) return {1};
  if (k == 2) return {1, 3};
  const u64 half = modulus / 2;
  return {1, half - 1, half + 1, modulus - 1};
}

}  // namespace

u64 rho_count(std::span<const PrimePower> factors) {
  u64 rho = 1;
  for (const auto& f : factors) {
    if (f.prime != 2) rho *= 2;
    else rho *= (f.exponent == 1 ? 2 : 4);  // modulus 2^(2e): 4 -> 2 roots, 16+ -> 4
  }
  return rho;
}

u64 rho_count(u64 u) { return rho_count(factorize(u)); }

RootsOfUnity roots_of_unity(u64 u) { return roots_of_unity(u, factorize(u)); }

RootsOfUnity roots_of_unity(u64 u, std::span<const PrimePower> factors) {
  if (u == 0) throw DomainError("roots_of_unity: u must be positive");
  if (u >= (u64{1} << 32)) throw DomainError("roots_of_unity: u^2 exceeds 64 bits");
  RootsOfUnity out;
  out.u = u;
  std::vector<u64> acc{0};
  u64 modulus = 1;
  for (const auto& f : factors) {
    u64 local_mod = 1;
    for (unsigned i = 0; i < 2 * f.exponent; ++i) local_mod *= f.prime;
    const auto local = local_roots(f.prime, 2 * f.exponent, local_mod);
    // x = r1 + m1 * ((r2 - r1) * m1^{-1} mod m2)
    const u64 inv = inverse_mod(modulus % local_mod, local_mod);
    std::vector<u64> next;
    next.reserve(acc.size() * local.size());
    for (const u64 r1 : acc)
      for (const u64 r2 : local) {
        const u64 diff = (r2 + local_mod - r1 % local_mod) % local_mod;
        next.push_back(r1 + modulus * mul_mod(diff, inv, local_mod));
      }
    acc.swap(next);
    modulus *= local_mod;
  }
  std::sort(acc.begin(), acc.end());
  out.residues = std::move(acc);
  out.rho = out.residues.size();
  return out;
}

std::vector<u64> rho_table(u64 X) {
  std::vector<u64> rho(X + 1, 1);
  const SmallestFactorSieve spf(std::max<u64>(X, 1));
  for (u64 u = 2; u <= X; ++u) rho[u] = rho_count(spf.factorize(u));
  rho[0] = 0;
  return rho;
}

RhoSum rho_sum(u64 X, unsigned threads) {
  if (X == 0) throw DomainError("rho_sum: X must be positive");
  const auto rho = rho_table(X);
  const auto blocks = fixed_blocks(1, X, kBlock);
  std::vector<u128> partial(blocks.size(), 0);
  parallel_for(blocks.size(), threads, [&](std::size_t b) {
    u128 s = 0;
    for (u64 u = blocks[b].lo; u <= blocks[b].hi; ++u) {
      // floor(rho * 2^64 / u), split to stay in 128 bits
      const u64 whole = rho[u] / u, frac = rho[u] % u;
      s += (static_cast<u128>(whole) << 64) + (static_cast<u128>(frac) << 64) / u;
    }
    partial[b] = s;
  });
  u128 total = 0;
  for (const u128 s : partial) total += s;
  const long double value = static_cast<long double>(total >> 64) +
                            std::ldexp(static_cast<long double>(static_cast<u64>(total)), -64);
  const double logX = std::log(static_cast<double>(X));
  return {static_cast<double>(value), 4.0 / (std::numbers::pi * std::numbers::pi) * logX * logX};
}

RhoWeightedSum rho_weighted_sum(u64 X, Alpha alpha, unsigned threads) {
  if (X == 0) throw DomainError("rho_weighted_sum: X must be positive");
  if (alpha.num == 0) throw DomainError("rho_weighted_sum: alpha must be positive");
  const auto rho = rho_table(X);
  const long double exponent = static_cast<long double>(alpha.den) / (2.0L * alpha.num) - 1.0L;
  const auto blocks = fixed_blocks(1, X, kBlock);
  std::vector<long double> partial(blocks.size(), 0.0L);
  parallel_for(blocks.size(), threads, [&](std::size_t b) {
    long double s = 0.0L;
    for (u64 u = blocks[b].lo; u <= blocks[b].hi; ++u)
      s += static_cast<long double>(rho[u]) * std::pow(static_cast<long double>(u), exponent);
    partial[b] = s;
  });
  long double total = 0.0L;
  for (const long double s : partial) total += s;
  RhoWeightedSum out{static_cast<double>(total), std::nullopt};
  if (X > 1) {
    const long double lx = std::log(static_cast<long double>(X));
    const long double scale = std::pow(static_cast<long double>(X), exponent + 1.0L) * lx;
    out.ratio = static_cast<double>(total / scale);
  }
  return out;
}

void write_rho_table_csv(std::ostream& out, u64 X) {
  const auto rho = rho_table(X);
  out << "u,rho\n";
  for (u64 u = 1; u <= X; ++u) out << u << ',' << rho[u] << '\n';
}

void write_rho_sweep_csv(std::ostream& out, std::span<const u64> Xs, unsigned threads) {
  const auto old_precision = out.precision(17);
  out << "X,value,reference\n";
  for (const u64 X : Xs) {
    const RhoSum s = rho_sum(X, threads);
    out << X << ',' << s.value << ',' << s.reference << '\n';
  }
  out.precision(old_precision);
}

}  // namespace zpell
