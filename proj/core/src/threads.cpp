#include "afmcf/threads.hpp"

#include <cstdlib>
#include <string>

#ifdef AFMCF_HAVE_OPENMP
#include <omp.h>
#endif

namespace afmcf {

void set_max_threads(int n) {
#ifdef AFMCF_HAVE_OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

void apply_thread_env() {
    const char* env = std::getenv("AFMCF_THREADS");
    if (!env) return;
    try {
        set_max_threads(std::stoi(env));
    } catch (...) {
        // Malformed value: ignore, keep the runtime default.
    }
}

} // namespace afmcf
