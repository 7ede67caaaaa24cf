#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace subfrac {

/// Worker cap: SUBFRAC_THREADS when set, otherwise 1 (single-threaded runs
/// are the determinism baseline; parallel regions only ever write disjoint
/// slots, so any cap produces identical results).
inline std::size_t worker_count() {
  static const std::size_t cached = [] {
    const char* env = std::getenv("SUBFRAC_THREADS");
    if (!env) return std::size_t{1};
    const long v = std::strtol(env, nullptr, 10);
    if (v < 1) return std::size_t{1};
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    return std::min<std::size_t>((std::size_t)v, hw);
  }();
  return cached;
}

/// Chunked parallel loop over [0, n). fn must only touch slot i.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace subfrac
