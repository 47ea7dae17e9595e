#pragma once

// Deterministic fork-join helper. Tasks are indexed; results land in a
// vector slot per index, so the merged output is independent of worker
// count and scheduling. The first exception thrown by any task is
// rethrown on the calling thread after join.

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sqrd {

template <typename R, typename Fn>
std::vector<R> parallel_map_ordered(std::size_t n, int workers, Fn&& fn) {
  std::vector<R> results(n);
  if (n == 0) return results;
  if (workers < 1) workers = 1;
  auto thread_count = static_cast<std::size_t>(workers);
  if (thread_count > n) thread_count = n;

  if (thread_count == 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(n);  // drain remaining work
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (std::size_t i = 0; i < thread_count; ++i) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace sqrd
