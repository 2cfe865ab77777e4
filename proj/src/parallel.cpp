#include "blab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace blab {
namespace {
std::atomic<int> g_override{0};
}

int thread_count() {
    if (const int o = g_override.load(); o > 0) return o;
    if (const char* env = std::getenv("BUSEMANN_LAB_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

void set_thread_count(int n) { g_override.store(n > 0 ? n : 0); }

}  // namespace blab
