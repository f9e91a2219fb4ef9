#pragma once

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace qwell {

enum class Execution { serial, parallel };

// Runs body(i) for i in [0, n). Both policies call the same body, and every
// iteration writes only its own output slot, so results are bitwise identical.
// Bodies must not throw: callers validate inputs before entering the loop.
template <typename Body>
void parallel_for(Execution exec, std::size_t n, const Body& body) {
#if defined(_OPENMP)
    if (exec == Execution::parallel) {
        const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < nn; ++i) {
            body(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) {
        body(i);
    }
}

inline bool parallel_available() {
#if defined(_OPENMP)
    return true;
#else
    return false;
#endif
}

}  // namespace qwell
