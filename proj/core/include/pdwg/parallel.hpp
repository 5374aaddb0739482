// Optional shared-memory parallelism, controlled by the PDWG_THREADS
// environment variable. Unset or 0 means sequential execution. Results are
// bit-for-bit independent of the worker count: loops only fill disjoint
// per-index slots and every reduction happens sequentially afterwards.

#pragma once

#include <functional>

namespace pdwg {

/// Worker count requested through PDWG_THREADS (>= 1; 1 when unset, 0, or invalid).
int worker_count();

/// Runs body(i) for i in [begin, end), on worker_count() threads.
void parallel_for(int begin, int end, const std::function<void(int)>& body);

} // namespace pdwg
