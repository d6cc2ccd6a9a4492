#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace lsalign::detail {

/// Runs fn(0) .. fn(n-1) on up to `workers` threads. Results must be written
/// to disjoint slots; iteration order is unspecified but the strided split is
/// fixed, so outputs are reproducible. The first exception (by thread index)
/// is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t w = std::min(workers, n);
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    threads.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += w) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace lsalign::detail
