#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "zpell/arith.hpp"

namespace zpell {

/// a/t with every partial quotient of `quotients` at most the queried bound.
struct ZarembaWitness {
  u64 t = 0;
  u64 a = 0;
  std::vector<u64> quotients;
};

/// Membership of t in Z(A): some 0 < a < t, gcd(a, t) = 1, such that a/t has
/// an expansion (either of its two) with all partial quotients <= A. Returns
/// the witness with the smallest a. t < 2 is never a member.
std::optional<ZarembaWitness> is_in_Z(u64 t, unsigned A);

/// Re-derives the witness from scratch: a/t reduced, expansion reconstructs,
/// bound respected.
bool witness_valid(const ZarembaWitness& w, unsigned A);

class ZarembaSieve {
 public:
  ZarembaSieve() = default;
  ZarembaSieve(u64 N, unsigned A);

  u64 N() const { return N_; }
  unsigned A() const { return A_; }
  bool contains(u64 t) const { return t >= 1 && t <= N_ && (bits_[(t - 1) >> 3] >> ((t - 1) & 7) & 1); }
  void set(u64 t) { bits_[(t - 1) >> 3] |= static_cast<std::uint8_t>(1u << ((t - 1) & 7)); }
  u64 count() const;

  // bit (t - 1), LSB first within each byte
  std::span<const std::uint8_t> bytes() const { return bits_; }
  std::vector<std::uint8_t>& mutable_bytes() { return bits_; }

  bool subset_of(const ZarembaSieve& other) const;

  std::map<u64, ZarembaWitness> witnesses;

 private:
  u64 N_ = 0;
  unsigned A_ = 1;
  std::vector<std::uint8_t> bits_;
};

struct SieveOptions {
  unsigned threads = 1;
  bool record_witnesses = false;
};

/// Marks every continuant <= N of a quotient string over {1..A}.
ZarembaSieve sieve_Z(u64 N, unsigned A, SieveOptions options = {});

/// "ZSV1" cache file; read throws CacheCorrupt on bad magic or length.
void write_sieve(const std::filesystem::path& path, const ZarembaSieve& sieve);
ZarembaSieve read_sieve(const std::filesystem::path& path);

/// Probability weights on (N/2, N], proportional to the number of quotient
/// strings over {1..A} with that continuant.
struct ThetaMeasure {
  u64 N = 0;
  unsigned A = 1;
  std::vector<u64> counts;     // index n in [0, N]
  std::vector<double> weights;  // counts / total
  u64 total = 0;

  double sum_of_squares() const;
};

/// Throws EmptySupport when the window holds no continuant.
ThetaMeasure theta_density(u64 N, unsigned A, unsigned threads = 1);

}  // namespace zpell
