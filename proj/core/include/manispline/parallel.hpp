#pragma once

#include <cstddef>
#include <functional>

namespace manispline {

/// Worker count used by parallel_for. 0 means hardware concurrency.
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [0, n). Iterations must be independent; results must
/// be written to disjoint slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace manispline
