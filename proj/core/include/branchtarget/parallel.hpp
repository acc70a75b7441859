#pragma once

#include <cstddef>
#include <functional>

namespace bt {

// Thread count resolution: explicit request (> 0) wins, then the
// BRANCH_TARGET_THREADS environment variable, then hardware concurrency.
int resolve_threads(int requested);

// Run body(0..n-1) on up to `threads` workers.  Work items must write only
// to their own slots; the first thrown exception is rethrown after join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

} // namespace bt
