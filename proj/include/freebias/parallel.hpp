#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace freebias {

/// Worker count: FREEBIAS_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on a static partition of the index range.
/// Each index is handled by exactly one worker, so results written per index do not depend
/// on scheduling. The first exception (lowest worker id) is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace freebias
