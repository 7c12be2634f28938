#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace plspress {

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
///
/// Each index is processed exactly once and results must be written to
/// per-index slots, so the outcome does not depend on the schedule. If any
/// call throws, the exception from the lowest failing index is rethrown after
/// all workers finish.
template <typename Fn>
void parallel_for(Eigen::Index count, int threads, Fn&& fn) {
  if (count <= 0) return;
  const Eigen::Index workers = std::clamp<Eigen::Index>(threads, 1, count);
  if (workers == 1) {
    for (Eigen::Index i = 0; i < count; ++i) fn(i);
    return;
  }

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (Eigen::Index w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (Eigen::Index i = w; i < count; i += workers) {
          try {
            fn(i);
          } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Number of hardware threads, at least 1.
inline int default_thread_count() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace plspress
