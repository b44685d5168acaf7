#pragma once

#include <cstddef>
#include <functional>

namespace parifs {

/// Worker count: PARIFS_THREADS when set to a positive integer, else the hardware concurrency.
unsigned worker_count();

/// Runs body(0..count-1) over worker_count() threads with a static round-robin split.
/// Callers write results into per-index slots, so output never depends on scheduling.
/// If bodies throw, the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace parifs
