#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace cevem {

/// Calls fn(i) for i in [0, count) on `workers` threads with contiguous
/// sharding. If any call throws, the exception from the smallest failing
/// index is rethrown after all threads join, so failures do not depend on
/// scheduling either.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, std::max<std::size_t>(count, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  struct Failure {
    std::size_t index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error;
  };
  std::vector<Failure> failures(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      for (std::size_t i = begin; i < end; ++i) {
        try {
          fn(i);
        } catch (...) {
          failures[w] = {i, std::current_exception()};
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  const auto first = std::min_element(failures.begin(), failures.end(),
                                      [](const Failure& a, const Failure& b) { return a.index < b.index; });
  if (first->error) std::rethrow_exception(first->error);
}

/// out[i] = fn(i), evaluated under parallel_for.
template <class Fn>
auto parallel_map(std::size_t count, std::size_t workers, Fn&& fn) {
  using Value = decltype(fn(std::size_t{}));
  std::vector<Value> out(count);
  parallel_for(count, workers, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace cevem
