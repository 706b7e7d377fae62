#pragma once

#include <functional>

namespace bbo {

// Runs fn(0..n-1) on up to `threads` workers. Tasks must write only to their
// own slots; results are then independent of the thread count. The first
// exception thrown by any task is rethrown on the caller.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace bbo
