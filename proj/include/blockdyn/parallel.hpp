#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace blockdyn::par {

// Worker count: hardware concurrency capped by BLOCKDYN_THREADS.
inline unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("BLOCKDYN_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
  }
  return n;
}

// Fixed chunk size so the work decomposition (and therefore every result
// combined in chunk order) is independent of the number of workers.
inline constexpr std::uint64_t kChunk = 1u << 14;

inline std::uint64_t chunk_count(std::uint64_t n) { return (n + kChunk - 1) / kChunk; }

// Runs fn(chunk_index, begin, end) over [0, n) split into kChunk-sized
// chunks. fn must only write to state owned by its chunk index.
inline void for_chunks(std::uint64_t n,
                       const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& fn) {
  const std::uint64_t nchunks = chunk_count(n);
  unsigned workers = worker_count();
  if (nchunks <= 1 || workers == 1) {
    for (std::uint64_t c = 0; c < nchunks; ++c)
      fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
    return;
  }
  if (workers > nchunks) workers = static_cast<unsigned>(nchunks);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t c = w; c < nchunks; c += workers)
        fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
    });
  }
  for (auto& t : pool) t.join();
}

// Parallel loop over items [0, n) with per-item independent work.
inline void for_items(std::uint64_t n, const std::function<void(std::uint64_t)>& fn) {
  unsigned workers = worker_count();
  if (n <= 1 || workers == 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace blockdyn::par
