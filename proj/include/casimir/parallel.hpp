#pragma once

#include <cstddef>
#include <functional>

namespace casimir {

/// Worker count: hardware concurrency capped by the CASIMIR_THREADS
/// environment variable (a value of 1 disables threading).
int worker_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous chunks;
/// callers own any output slots, so results are position-addressed and the
/// final reduction order is up to the caller (deterministic by construction).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace casimir
