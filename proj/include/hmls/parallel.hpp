#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace hmls {

inline int resolve_thread_count(int requested) {
  if (requested >= 1) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Static partition of [0, n) into contiguous chunks, one thread per chunk.
/// Each index is visited exactly once; callers write to disjoint slots, so
/// results are identical for any thread count.
inline void parallel_for(int n, int threads,
                         const std::function<void(int, int)>& body) {
  threads = std::min(resolve_thread_count(threads), n > 0 ? n : 1);
  if (threads <= 1 || n <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace hmls
