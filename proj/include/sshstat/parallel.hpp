#pragma once

#include <cstddef>
#include <functional>

namespace sshstat {

/// Worker count for parallel loops: hardware concurrency, capped by the
/// SSH_STAT_THREADS environment variable when set. Always >= 1.
std::size_t thread_budget();

/// Run fn(i) for i in [0, n) on up to thread_budget() threads, contiguous
/// index chunks per thread. Callers get determinism by writing only to
/// slot i from fn(i). If any call throws, the exception thrown from the
/// smallest index is rethrown after all workers join.
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace sshstat
