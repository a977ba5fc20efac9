#include "carlton/exec.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace carlton {

int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_worker_count(int workers) {
#ifdef _OPENMP
    omp_set_num_threads(std::max(1, workers));
#else
    (void)workers;
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

} // namespace carlton
