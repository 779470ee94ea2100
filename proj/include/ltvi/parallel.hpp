#pragma once

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace ltvi {

/// Execution policy for the grid/batch kernels. Every parallel kernel has a
/// serial twin reached through ExecPolicy::Serial; results are identical
/// because each index writes its own slot and reductions run serially
/// afterwards, in index order.
enum class ExecPolicy { Serial, Parallel };

namespace par {

template <class F>
void for_index(std::ptrdiff_t n, ExecPolicy policy, F&& body) {
    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            body(i);
        }
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            body(i);
        }
    }
}

inline int thread_count() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline double wtime() {
#if defined(_OPENMP)
    return omp_get_wtime();
#else
    return 0.0;
#endif
}

}  // namespace par
}  // namespace ltvi
