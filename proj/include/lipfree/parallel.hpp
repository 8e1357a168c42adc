#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace lipfree {

/// Runs body(begin, end, worker) over contiguous blocks of [0, n) on up to
/// `threads` workers. Callers reduce per-worker results in worker order, so
/// the outcome does not depend on scheduling.
template <class Body>
void parallel_blocks(std::size_t n, unsigned threads, Body&& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers == 1) {
    body(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi, w] { body(lo, hi, w); });
  }
  for (auto& t : pool) t.join();
}

inline std::size_t worker_count(std::size_t n, unsigned threads) {
  return std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
}

}  // namespace lipfree
