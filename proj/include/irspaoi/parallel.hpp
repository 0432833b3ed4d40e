#pragma once

// Deterministic fork-join helper: static contiguous partition of [0, n) over
// worker threads. Worker count from IRS_PAOI_THREADS (capped), else hardware
// concurrency. Results must be written to disjoint slots so the outcome is
// identical at any worker count.

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace irspaoi {

inline unsigned thread_budget() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("IRS_PAOI_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return std::min<unsigned>(unsigned(v), 256u);
  }
  return hw;
}

template <typename Fn>
void parallel_for(size_t n, Fn&& fn) {
  unsigned workers = std::min<size_t>(thread_budget(), n ? n : 1);
  if (workers <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    size_t lo = size_t(w) * chunk;
    size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace irspaoi
