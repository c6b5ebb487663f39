#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace orw {

/// Worker count: ORW_THREADS env var when set, hardware concurrency otherwise.
inline int default_thread_count() {
  if (const char* env = std::getenv("ORW_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

inline int resolve_threads(int requested) {
  return requested > 0 ? requested : default_thread_count();
}

/// Runs fn(block, lo, hi) over a static partition of [0, count) into
/// `threads` contiguous blocks. Results are reproducible regardless of the
/// thread count as long as fn writes only to per-index slots or reduces into
/// per-block storage that the caller merges in block order (or into exact
/// integer accumulators, which commute).
template <class Fn>
void parallel_blocks(std::int64_t count, int threads, Fn&& fn) {
  const std::int64_t limit = std::max<std::int64_t>(count, 1);
  threads = static_cast<int>(
      std::max<std::int64_t>(1, std::min<std::int64_t>(resolve_threads(threads), limit)));
  if (threads == 1) {
    fn(0, std::int64_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const std::int64_t per = count / threads;
  const std::int64_t extra = count % threads;
  std::int64_t lo = 0;
  for (int b = 0; b < threads; ++b) {
    const std::int64_t hi = lo + per + (b < extra ? 1 : 0);
    pool.emplace_back([&fn, b, lo, hi] { fn(b, lo, hi); });
    lo = hi;
  }
  for (auto& t : pool) t.join();
}

/// Per-index convenience: fn(i) with deterministic-slot discipline.
template <class Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
  parallel_blocks(count, threads, [&fn](int, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) fn(i);
  });
}

}  // namespace orw
