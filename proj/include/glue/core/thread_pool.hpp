#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace glue {

// Index-sharded parallel loop. Results must be written to per-index slots so
// the outcome is identical for any worker count (including 0/1 = inline).
inline void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const int k = static_cast<int>(std::min<size_t>(workers, n));
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(k);
  for (int t = 0; t < k; ++t) {
    threads.emplace_back([&]() {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : threads) t.join();
}

inline int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace glue
