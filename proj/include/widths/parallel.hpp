#pragma once

// Minimal data-parallel helper.  Work is split into contiguous index ranges;
// callers must make per-range results combine independently of the split
// (integer tallies, max-reductions), so the outcome is bitwise identical for
// any worker count.  The WIDTHS_THREADS environment variable caps workers
// without affecting results.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace widths {

inline unsigned worker_count() {
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (const char* env = std::getenv("WIDTHS_THREADS")) {
    char* end = nullptr;
    const unsigned long requested = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && requested >= 1)
      workers = static_cast<unsigned>(std::min(requested, 256ul));
  }
  return workers;
}

// Calls fn(worker_index, begin, end) over a partition of [0, n).  fn must
// not throw; store per-worker results by worker_index and reduce after.
template <typename Fn>
unsigned parallel_for_ranges(std::uint64_t n, Fn&& fn) {
  const std::uint64_t min_per_worker = 1 << 12;
  unsigned workers = worker_count();
  if (n < 2 * min_per_worker) workers = 1;
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n, 1)));
  if (workers <= 1) {
    fn(0u, static_cast<std::uint64_t>(0), n);
    return 1;
  }
  const std::uint64_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min(n, begin + chunk);
    pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
  for (std::thread& t : pool) t.join();
  return workers;
}

}  // namespace widths
