#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace fsoqkd::detail {

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Callers write
// results into pre-sized slots, so output order never depends on scheduling.
template <class F> void parallel_for(std::size_t count, int jobs, const F& fn) {
  const auto workers_wanted = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (workers_wanted <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  for (std::size_t w = 0; w < workers_wanted; ++w)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
}

} // namespace fsoqkd::detail
