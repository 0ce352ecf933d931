#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace specgap {

inline int default_workers() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// Runs fn(i) for i in [0,n).  Each index writes only its own output slot, so
// the result is independent of the worker count; any reduction over the
// outputs must happen afterwards in index order.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int nt = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
}

}  // namespace specgap
