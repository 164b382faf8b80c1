#include "rft/parallel.hpp"

#include <omp.h>

namespace rft {

int default_workers() noexcept {
    const int n = omp_get_max_threads();
    return n > 0 ? n : 1;
}

}  // namespace rft
