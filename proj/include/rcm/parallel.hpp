#pragma once

#include <cstddef>
#include <functional>

namespace rcm {

/// Worker threads used by parallel_for; defaults to the hardware concurrency.
void set_thread_count(int threads);
int thread_count();

/// Runs body(0), ..., body(count - 1), possibly concurrently. Results must not
/// depend on scheduling: every task owns its seed and writes only its own slot.
/// The first exception thrown by a task is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace rcm
