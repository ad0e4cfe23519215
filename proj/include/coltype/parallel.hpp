#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coltype {

// Serial is the reference path; Parallel dispatches the same body through
// OpenMP. Both must produce identical results: every loop body is keyed by
// its index, never by execution order.
enum class ExecMode { Serial, Parallel };

template <typename Fn>
void parallel_for(std::size_t n, ExecMode mode, Fn&& fn) {
  if (mode == ExecMode::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }

  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace coltype
