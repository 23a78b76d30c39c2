#pragma once

// Per-level parallelism. The worker count comes from L2APPROX_THREADS (or an
// explicit override); results are written by index so output order never
// depends on scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace l2approx {

inline constexpr const char* kThreadsEnv = "L2APPROX_THREADS";

// Override first, then the environment variable, then the hardware count.
std::size_t thread_count();
// 0 clears the override.
void set_thread_count(std::size_t n);

// Runs f(0..n-1). When several calls throw, the exception of the smallest
// index is rethrown, matching a sequential run.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  const std::size_t workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) f(k);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < n;) {
      try {
        f(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace l2approx
