#ifndef ENVFORGE_PAR_HPP
#define ENVFORGE_PAR_HPP

#include <cstdlib>
#include <string>

#ifdef ENVFORGE_OPENMP
#include <omp.h>
#endif

namespace envforge::par {

// Sweep-level parallelism cap. ENVFORGE_THREADS limits how many runs a sweep
// command executes concurrently; 0 means "hardware default".
inline int thread_cap() {
    if (const char* s = std::getenv("ENVFORGE_THREADS")) {
        try {
            int n = std::stoi(s);
            if (n > 0) return n;
        } catch (...) {
        }
    }
    return 0;
}

inline int max_threads() {
#ifdef ENVFORGE_OPENMP
    int cap = thread_cap();
    int hw = omp_get_max_threads();
    return (cap > 0 && cap < hw) ? cap : hw;
#else
    return 1;
#endif
}

// Parallel loop over independent runs (one owner per iteration, no shared
// mutable state). Body must be exception-free or handle its own errors.
template <typename F>
void for_each_run(int n, F&& body) {
#ifdef ENVFORGE_OPENMP
    int nt = max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (int i = 0; i < n; ++i) body(i);
#else
    for (int i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace envforge::par

#endif
