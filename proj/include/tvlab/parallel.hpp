#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tvlab {

// Execution policy for the sampling kernels. threads == 1 is the serial reference path;
// threads > 1 dispatches the same per-index body through OpenMP. Results must not depend
// on the policy: bodies write only to their own index and reductions are order-independent.
struct Exec {
  int threads = 1;
  static Exec serial() { return Exec{1}; }
  static Exec hardware() {
#ifdef _OPENMP
    return Exec{omp_get_max_threads()};
#else
    return Exec{1};
#endif
  }
};

template <typename F>
void parallel_for(std::int64_t n, const Exec& exec, F&& body) {
  if (exec.threads <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(exec.threads)
  for (std::int64_t i = 0; i < n; ++i) body(i);
#else
  for (std::int64_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace tvlab
