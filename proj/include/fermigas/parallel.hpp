#pragma once

#include <cstddef>
#include <functional>

namespace fermigas {

/// Worker count used by parallel loops. Defaults to FERMIGAS_THREADS or 1.
int thread_count();
void set_thread_count(int n);

/// Calls body(i) for i in [0, n). Each index is processed exactly once; callers
/// write results into per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fermigas
