#ifndef ZLAB_SWEEP_HPP
#define ZLAB_SWEEP_HPP

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace zlab {

// Evaluates f(i) for i in [0, n) into a vector. jobs == 1 runs the plain serial
// loop; jobs == 0 uses the OpenMP default team size. Each slot is written by
// exactly one iteration, so the result does not depend on the schedule.
template <class R, class F>
std::vector<R> sweep(std::size_t n, int jobs, F&& f) {
  std::vector<R> out(n);
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  std::exception_ptr err;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(zlab_sweep_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace zlab

#endif
