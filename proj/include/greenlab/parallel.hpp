#ifndef GREENLAB_PARALLEL_HPP
#define GREENLAB_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace greenlab {

/// Worker count: hardware concurrency, capped by GREENLAB_THREADS when set.
unsigned thread_count();

/// Runs body(i) for i in [0, n). Iterations must only write to slot i of
/// caller-owned storage; reductions happen afterwards in index order, which
/// keeps results independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace greenlab

#endif  // GREENLAB_PARALLEL_HPP
