#ifndef PASV_PARALLEL_HPP
#define PASV_PARALLEL_HPP

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdlib>

namespace pasv {

/// Number of worker threads data-parallel kernels may use.
///
/// Defaults to all available cores; the PASV_WORKERS environment variable
/// caps it. Re-read on every call so tests can change the cap mid-process.
inline int worker_count() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("PASV_WORKERS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = cap;
    }
    return n < 1 ? 1 : n;
}

} // namespace pasv

#endif
