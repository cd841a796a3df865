#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bar {

/// Calls body(i) for every i in [0, count) on up to `parallelism` threads.
/// Work is claimed index by index; callers write results into slot i so the
/// outcome is independent of scheduling. The first exception is rethrown.
template <typename Body>
void parallel_for(std::uint64_t count, unsigned parallelism, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, parallelism), std::max<std::uint64_t>(count, 1)));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace bar
