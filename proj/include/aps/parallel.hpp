#pragma once

#ifdef APS_OMP
#include <omp.h>
#define APS_OMP_PRAGMA(content) _Pragma(content)
#else
#define APS_OMP_PRAGMA(content)
inline int omp_get_max_threads() { return 1; }
inline int omp_get_thread_num() { return 0; }
inline int omp_in_parallel() { return 0; }
inline void omp_set_num_threads(int) {}
#endif

namespace aps {

/// Sets the thread count used by the parallel kernels; values < 1 leave the
/// runtime default untouched.
inline void set_thread_count(int jobs) {
  if (jobs >= 1) omp_set_num_threads(jobs);
}

inline int thread_count() { return omp_get_max_threads(); }

}  // namespace aps
