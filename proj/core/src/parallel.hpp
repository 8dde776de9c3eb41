#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace seqbound::detail {

// Runs fn(i) for i in [0, n) on up to `workers` threads (0 = hardware
// concurrency). fn must write results to index-addressed storage and must
// not throw; callers catch per-item errors inside fn so assembly stays
// deterministic regardless of scheduling.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  int w = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  if (w < 1) w = 1;
  if (w > n) w = n;
  if (w == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int t = 0; t < w; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& t : pool) t.join();
}

}  // namespace seqbound::detail
