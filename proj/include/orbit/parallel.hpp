#pragma once

#include <cstddef>

namespace orbit {

/// Execution policy for the data-parallel kernels. Serial is the reference
/// path the tests compare the OpenMP path against; both produce identical
/// results in identical order.
enum class Exec { Serial, Parallel };

/// Reads ORBIT_LOCATOR_THREADS and caps the OpenMP team size accordingly.
/// Unset or unparsable values leave the OpenMP default in place.
void apply_thread_cap_from_env();

/// Current upper bound on OpenMP threads.
int max_threads();

/// Number of fixed work chunks a kernel splits `count` items into. Chunk
/// boundaries depend only on `count`, never on the thread count, so
/// concatenating per-chunk results is deterministic.
std::size_t chunk_count(std::size_t count);

}  // namespace orbit
