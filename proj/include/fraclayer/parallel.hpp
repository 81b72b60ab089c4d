#pragma once

#include <functional>

namespace fraclayer {

/// Worker count: FRACLAYER_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Calls body(i) for i in [0, n) on up to thread_count() threads.
/// Callers write into per-index slots and reduce afterwards in index order.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace fraclayer
