#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cobranet {

/// Thread count from an explicit request, else COBRANET_THREADS, else 1.
unsigned resolve_threads(unsigned requested);

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Work items
/// are claimed dynamically, so fn must write its result into a slot keyed
/// by i for the output to be independent of scheduling. The first exception
/// thrown by any worker is rethrown here.
template <typename Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || count <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };

  {
    std::vector<std::jthread> pool;
    const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace cobranet
