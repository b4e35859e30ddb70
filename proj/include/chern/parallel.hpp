#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace chern {

// index-sharded loop over [0, n). fn must not throw (workers would terminate);
// callers store per-index results or error strings in preallocated slots, so
// the output order never depends on scheduling.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int k = std::min(workers, n);
  pool.reserve(k);
  for (int t = 0; t < k; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace chern
