#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fresco::detail {

inline std::size_t worker_count(std::size_t items, std::size_t min_per_worker = 64) {
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return std::clamp<std::size_t>(items / std::max<std::size_t>(1, min_per_worker), 1, hw);
}

// Calls body(begin, end, chunk) over contiguous chunks of [0, n). Chunk
// boundaries depend only on n and the worker count, and each chunk writes to
// its own slot, so callers get a deterministic merge by walking chunks in order.
// The first exception thrown by any chunk is rethrown after all threads join.
template <typename Body>
void parallel_chunks(std::size_t n, std::size_t workers, Body&& body) {
  if (workers <= 1 || n < 2) {
    body(std::size_t{0}, n, std::size_t{0});
    return;
  }
  workers = std::min(workers, n);
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  std::exception_ptr first;
  std::mutex mu;
  auto run = [&](std::size_t w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    try {
      body(begin, end, w);
    } catch (...) {
      std::lock_guard lock(mu);
      if (!first) first = std::current_exception();
    }
  };
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(run, w);
  run(0);
  for (auto& t : threads) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace fresco::detail
