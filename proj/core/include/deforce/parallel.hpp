#pragma once

#include <cstddef>
#include <functional>

namespace deforce {

/// Worker threads available to the library: DEFORCE_THREADS when set to a
/// positive integer, otherwise the hardware concurrency (at least 1).
int thread_budget();

/// Runs body(i) for i in [0, count) on up to thread_budget() threads.
/// Each index runs exactly once; callers write results by index, so the
/// outcome does not depend on scheduling. After all workers finish, the
/// exception from the lowest failing index (if any) is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace deforce
