#pragma once

// OpenMP data-parallel loop used by the pairwise, per-trajectory and
// Monte-Carlo kernels. Every parallel kernel has a serial path selected by
// Execution::serial; the serial path is the reference the tests compare
// against and must produce bit-identical results.

#include <cstddef>
#include <exception>
#include <mutex>

namespace mwarp {

enum class Execution { serial, parallel };

/// Calls body(i) for i in [0, count). Work items must be independent.
/// The first exception thrown by any item is rethrown on the caller.
template <class Body>
void for_each_index(std::size_t count, Execution exec, Body&& body) {
  if (exec == Execution::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      const std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mwarp
