#pragma once

#include <cstddef>
#include <functional>

namespace aqo {

/// Caps the number of worker threads used by parallel_for (0 = hardware
/// concurrency). Process-wide.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(0..count-1), possibly concurrently. Each index is processed
/// exactly once; callers write results by index, so output order never
/// depends on scheduling. Nested calls run serially on the calling thread.
/// The exception thrown for the lowest failing index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace aqo
