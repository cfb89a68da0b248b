#include "morsespec/parallel.hpp"

#include <cstdlib>
#include <string>

namespace morsespec::parallel {

namespace {
#ifdef _OPENMP
const int kDefaultThreads = omp_get_max_threads();
#endif
}  // namespace

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_cap(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n >= 1 ? n : kDefaultThreads);
#else
    (void)n;
#endif
}

int apply_thread_env() {
    const char* raw = std::getenv("THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    char* end = nullptr;
    const long n = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || n < 1 || n > 4096) return 0;
    set_thread_cap(static_cast<int>(n));
    return static_cast<int>(n);
}

}  // namespace morsespec::parallel
