#pragma once

#include <cstdint>
#include <functional>

namespace mfcz {

/// Worker cap: MFCZ_THREADS when set (>= 1), hardware concurrency otherwise.
int max_threads();

/// Runs fn(0..n-1) on up to max_threads() workers. Callers keep determinism
/// by writing to disjoint, index-addressed slots; exceptions are rethrown
/// on the calling thread.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace mfcz
