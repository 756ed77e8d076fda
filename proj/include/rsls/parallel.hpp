#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rsls {

// 0 means use every hardware thread.
inline unsigned effective_workers(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

namespace detail {

template <class Body>
void run_pool(std::size_t n_tasks, unsigned workers, Body body) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto loop = [&] {
    for (;;) {
      std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= n_tasks) return;
      try {
        body(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n_tasks, std::memory_order_relaxed);
        return;
      }
    }
  };
  unsigned nw = std::min<std::size_t>(effective_workers(workers), n_tasks);
  std::vector<std::thread> pool;
  for (unsigned i = 0; i + 1 < nw; ++i) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

// Runs fn(i) for i in [0, n). fn must write only to disjoint slots, in which
// case the result is independent of the worker count.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn fn) {
  if (n == 0) return;
  detail::run_pool(n, workers, fn);
}

// Deterministic chunked reduction. [0, n) is split into fixed-size chunks,
// fn(begin, end) maps each chunk to an accumulator, and the per-chunk
// results are merged in chunk-index order. The partition depends only on
// chunk_size, never on the worker count, so floating point results are
// bit-identical for any number of threads.
template <class T, class ChunkFn, class MergeFn>
T chunked_reduce(std::size_t n, std::size_t chunk_size, unsigned workers,
                 T init, ChunkFn fn, MergeFn merge) {
  if (n == 0) return init;
  const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
  std::vector<T> partial(n_chunks, init);
  detail::run_pool(n_chunks, workers, [&](std::size_t c) {
    std::size_t b = c * chunk_size;
    std::size_t e = std::min(n, b + chunk_size);
    partial[c] = fn(b, e);
  });
  T acc = std::move(partial[0]);
  for (std::size_t c = 1; c < n_chunks; ++c) acc = merge(std::move(acc), std::move(partial[c]));
  return acc;
}

}  // namespace rsls
