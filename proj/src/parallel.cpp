#include "stablepred/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace stablepred {

int max_threads() {
  if (const char* env = std::getenv("STABLE_PREDICT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
  const int workers = std::min<std::int64_t>(max_threads(), n);
  if (workers <= 1 || n < 256) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      // Fixed block split: iteration-to-worker assignment is deterministic.
      const std::int64_t lo = n * w / workers;
      const std::int64_t hi = n * (w + 1) / workers;
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace stablepred
