#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace zpell::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kDomain = 3,
  kCacheCorrupt = 4,
};

struct RunConfig {
  std::string subcommand;

  std::optional<std::uint64_t> a, t, D, u, n, N, X, x, upto;
  std::optional<std::string> alpha;  // "p/q"
  std::vector<unsigned> A;
  std::vector<std::uint64_t> sweep;
  std::uint64_t grid = 0;  // 0: smallest power of two >= 2N
  std::uint64_t q_max = 8;
  std::uint64_t K_max = 8;
  std::string method = "direct";  // census: direct | both | literal
  unsigned threads = 1;
  std::string cache_dir;
  std::string output;  // main payload; stdout when empty
  std::string csv;     // record / profile table
  std::string mass_csv;
  std::string format;  // text | json; empty picks the subcommand default
};

/// Dispatches a parsed config. Diagnostics go to err; the return value is an
/// ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (args[0] is the program name) and runs.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zpell::cli
