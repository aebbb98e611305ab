#pragma once

#include <cstddef>
#include <functional>

namespace disperse {

// Worker count: hardware concurrency, capped by DISPERSE_THREADS when set.
unsigned thread_count();

// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
// depend only on n and the worker count; callers write to disjoint slots and
// merge in index order, so results match a sequential run.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace disperse
