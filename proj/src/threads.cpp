#include "neurodyn/threads.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace neurodyn {

int resolve_threads(int requested)
{
    if (requested > 0) return requested;

    if (const char* env = std::getenv("NEURODYN_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) return n;
        } catch (...) {
            // fall through to the hardware default
        }
    }

#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace neurodyn
