#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace netloc {

/// Calls fn(i) for i in [0, count) on up to hardware_concurrency threads.
/// The first exception thrown by any call is rethrown after all workers join.
/// Callers own result ordering; fn must only write to slot i.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace netloc

namespace netloc {

/// Splits [0, count) into fixed blocks of `block_size`, runs fn(i, acc) for
/// each item with one accumulator per block, and folds the block
/// accumulators in block order. Block boundaries do not depend on the thread
/// count, so the floating-point summation order is fixed.
template <typename Acc, typename Fn>
Acc ordered_block_reduce(std::size_t count, std::size_t block_size, const Acc& zero, Fn&& fn) {
  const std::size_t blocks = (count + block_size - 1) / block_size;
  std::vector<Acc> partial(blocks, zero);
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(count, (b + 1) * block_size);
    for (std::size_t i = b * block_size; i < end; ++i) fn(i, partial[b]);
  });
  Acc total = zero;
  for (auto& p : partial) total += p;
  return total;
}

}  // namespace netloc
