#pragma once

#include <cstddef>
#include <functional>

namespace idgnn {

/// Worker count: IDGNN_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, count). Each index runs exactly once; callers
/// write results into per-index slots so output order never depends on
/// scheduling. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace idgnn
