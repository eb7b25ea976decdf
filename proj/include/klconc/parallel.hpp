#pragma once

// Block-parallel execution over trial indices [0, total). Work is split into
// fixed-size blocks whose layout does not depend on the thread count; results
// come back indexed by block so any reduction over them is deterministic.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace klconc {

inline constexpr std::uint64_t kTrialBlock = 1024;

/// 0 means "all hardware threads". Never returns 0.
inline unsigned resolve_threads(unsigned requested) noexcept {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Calls fn(begin, end) for each block and returns the per-block results in
/// block order. The first exception thrown by any block is rethrown.
template <class Fn>
auto run_blocks(std::uint64_t total, unsigned threads, Fn&& fn, std::uint64_t block = kTrialBlock)
    -> std::vector<std::invoke_result_t<Fn&, std::uint64_t, std::uint64_t>> {
  using Result = std::invoke_result_t<Fn&, std::uint64_t, std::uint64_t>;
  const std::uint64_t blocks = (total + block - 1) / block;
  std::vector<Result> results(blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= blocks) return;
      try {
        results[b] = fn(b * block, std::min(total, (b + 1) * block));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks, std::memory_order_relaxed);
        return;
      }
    }
  };

  const auto workers = static_cast<unsigned>(
      std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(blocks, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace klconc
