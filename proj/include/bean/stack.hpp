#pragma once

#include <cstddef>
#include <functional>

namespace bean {

// Runs fn on a thread with a large stack and returns its result. Programs
// expanded from benchmarks nest thousands of lets deep and every pass over
// them is recursive. Exceptions thrown by fn are rethrown in the caller.
int run_with_large_stack(const std::function<int()>& fn, std::size_t bytes = std::size_t{1} << 30);

}  // namespace bean
