#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace pegasus {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index writes
/// only to its own output slot, so results do not depend on the schedule;
/// callers reduce over indices in order afterwards.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (int i = w; i < n; i += threads) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace pegasus
