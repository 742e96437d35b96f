#pragma once

#include <cstddef>
#include <functional>

namespace calf {

// Effective worker count: an explicit positive request wins, then the
// CALFROCKET_WORKERS environment variable, then hardware concurrency.
int resolve_workers(int requested);

// Runs fn(chunk_index, begin, end) over contiguous chunks of [0, n). Chunk
// boundaries depend only on n and the worker count, and results written to
// disjoint index ranges land in the same place no matter how many threads
// execute, so callers that only write per-index outputs are reproducible at
// any worker count. Exceptions thrown by fn are rethrown on the caller's
// thread.
void parallel_chunks(std::size_t n, int workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Number of chunks parallel_chunks will use for n items and this worker
// count (callers sizing per-chunk accumulators need it).
std::size_t chunk_count(std::size_t n, int workers);

}  // namespace calf
