#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace talkprofiler {

// Worker cap: min(hardware_concurrency, TALKPROFILER_THREADS). Always >= 1.
std::size_t max_threads();

// Runs fn(i) for i in [0, n) across up to max_threads() workers. Work items
// must be independent; scheduling order is unspecified.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min(max_threads(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

// Chunked reduction with a deterministic combine order: the input range is
// cut into fixed-size chunks, partials are computed in parallel and merged
// strictly in chunk order, so results do not depend on the thread count.
template <class Partial, class ChunkFn, class MergeFn>
Partial parallel_chunk_reduce(std::size_t n, std::size_t chunk_size,
                              Partial init, ChunkFn&& chunk_fn,
                              MergeFn&& merge_fn) {
  if (n == 0) return init;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(n, begin + chunk_size);
    partials[c] = chunk_fn(begin, end);
  });
  Partial out = std::move(init);
  for (std::size_t c = 0; c < chunks; ++c) {
    merge_fn(out, std::move(partials[c]));
  }
  return out;
}

}  // namespace talkprofiler
