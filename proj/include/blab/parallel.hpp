#pragma once
// Replica-parallel evaluation. Each replica writes its own slot, so results
// never depend on scheduling; the serial variant is the reference.

#include <cstddef>
#include <exception>
#include <limits>
#include <type_traits>
#include <vector>

namespace blab {

// Thread count: set_thread_count override, else BUSEMANN_LAB_THREADS, else
// the OpenMP default.
int thread_count();
void set_thread_count(int n);  // n <= 0 restores the default

template <class F>
auto map_replicas_serial(std::size_t n, F&& f) {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<R> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
    return out;
}

template <class F>
auto map_replicas(std::size_t n, F&& f) {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<R> out(n);
    const int threads = thread_count();
    const auto count = static_cast<long long>(n);
    // Exceptions cannot leave the parallel region; rethrow the one from the
    // lowest replica so the error matches the serial run.
    long long failed_at = std::numeric_limits<long long>::max();
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (long long i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(blab_map_replicas)
            if (i < failed_at) {
                failed_at = i;
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace blab
