#pragma once

// Thin OpenMP layer. Every parallel loop writes into per-index slots and the
// caller reduces them in index order, so results do not depend on the thread
// count.

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace morsespec::parallel {

/// Threads a parallel region will use (1 without OpenMP).
int max_threads();

/// Cap the number of threads; n < 1 restores the runtime default.
void set_thread_cap(int n);

/// Apply the THREADS environment variable if it holds a positive integer.
/// Returns the cap applied, or 0 if the variable is absent/invalid.
int apply_thread_env();

/// Run f(i) for i in [0, n). Exceptions thrown by f are captured and the
/// first one (in completion order) is rethrown after the loop.
template <class F>
void for_each_index(std::size_t n, bool parallel, F&& f) {
#ifdef _OPENMP
    if (parallel && n > 1 && omp_get_max_threads() > 1) {
        std::exception_ptr failure;
        std::mutex guard;
        const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < count; ++i) {
            try {
                f(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(guard);
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace morsespec::parallel
