#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace rft {

/// Number of workers used when a caller passes `workers <= 0`.
int default_workers() noexcept;

/// Runs `body(i)` for i in [0, n) on up to `workers` OpenMP threads.
/// Iterations must be independent. The first exception thrown by any
/// iteration is rethrown on the calling thread after the loop drains.
template <typename Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
    if (workers <= 0) workers = default_workers();
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace rft
