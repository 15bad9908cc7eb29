#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace zpell {

// Runs body(i) for every i in [0, n) on up to `threads` workers. Callers
// store per-index results and combine them in index order afterwards, so the
// outcome never depends on the schedule.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

// Splits [lo, hi] into fixed-size blocks; block boundaries depend only on the
// range, never on the thread count.
struct BlockRange {
  unsigned long long lo, hi;
};

inline std::vector<BlockRange> fixed_blocks(unsigned long long lo, unsigned long long hi,
                                            unsigned long long block) {
  std::vector<BlockRange> out;
  if (lo > hi) return out;
  for (unsigned long long b = lo;; b += block) {
    const unsigned long long e = (hi - b < block - 1) ? hi : b + block - 1;
    out.push_back({b, e});
    if (e == hi) break;
  }
  return out;
}

}  // namespace zpell
