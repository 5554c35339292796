#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace arraylab {

/// Runs body(i) for i in [0, count) on up to `workers` threads, in contiguous blocks.
/// The first exception (by block order) is rethrown after all threads finish.
inline void parallel_for(std::uint64_t count, int workers, const std::function<void(std::uint64_t)>& body) {
  std::uint64_t w = std::max<std::uint64_t>(1, std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(workers, 1)), count));
  if (w <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> threads;
  std::uint64_t block = (count + w - 1) / w;
  for (std::uint64_t t = 0; t < w; ++t) {
    threads.emplace_back([&, t] {
      try {
        for (std::uint64_t i = t * block; i < std::min(count, (t + 1) * block); ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace arraylab
