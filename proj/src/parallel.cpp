#include "orbit/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace orbit {

void apply_thread_cap_from_env() {
    const char* raw = std::getenv("ORBIT_LOCATOR_THREADS");
    if (raw == nullptr) return;
    try {
        const int cap = std::stoi(raw);
        if (cap > 0) omp_set_num_threads(cap);
    } catch (const std::exception&) {
        // ignore malformed values
    }
}

int max_threads() { return omp_get_max_threads(); }

std::size_t chunk_count(std::size_t count) {
    return std::clamp<std::size_t>(count / 256, 1, 256);
}

}  // namespace orbit
