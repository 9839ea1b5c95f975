// A minimal static work split over std::thread.

#ifndef CDIM_PARALLEL_HPP_
#define CDIM_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cdim {

  // Calls f(i) for i in [0, n) on up to `workers` threads.  Each index is
  // visited exactly once; callers write results into per-index slots.
  template <typename F>
  void parallel_for(size_t n, size_t workers, F&& f) {
    workers = std::max<size_t>(1, std::min(workers, n));
    if (workers == 1) {
      for (size_t i = 0; i < n; ++i) {
        f(i);
      }
      return;
    }
    std::exception_ptr       error;
    std::mutex               error_mtx;
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          for (size_t i = w; i < n; i += workers) {
            f(i);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mtx);
          if (!error) {
            error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
    if (error) {
      std::rethrow_exception(error);
    }
  }

}  // namespace cdim

#endif  // CDIM_PARALLEL_HPP_
