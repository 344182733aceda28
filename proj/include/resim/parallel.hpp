#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace resim {

/// Runs fn(i) for i in [0, n) across up to n_threads workers. Each index is
/// expected to write only its own output slot, which keeps results identical
/// regardless of scheduling. n_threads == 0 picks the hardware count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         unsigned n_threads = 0) {
  if (n == 0) return;
  unsigned workers = n_threads ? n_threads : std::thread::hardware_concurrency();
  if (workers < 1) workers = 1;
  if (workers > n) workers = static_cast<unsigned>(n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace resim
