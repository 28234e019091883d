#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace corrkit {

// Runs body(i) for i in [begin, end) across up to `threads` workers. Work is
// handed out by atomic counter; callers that need deterministic output write
// into preallocated per-index slots and merge in index order afterwards.
template <class F>
void parallel_for(std::int64_t begin, std::int64_t end, int threads, F&& body) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  int workers = threads;
  if (workers < 1) workers = 1;
  if (workers > count) workers = static_cast<int>(count);
  if (workers == 1) {
    for (std::int64_t i = begin; i < end; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next(begin);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= end) return;
        body(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace corrkit
