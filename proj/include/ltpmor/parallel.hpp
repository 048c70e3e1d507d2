#pragma once

#include <cstddef>
#include <functional>

namespace ltpmor {

// Default worker count: LTPMOR_JOBS if set, else hardware concurrency.
int default_jobs();

// Overrides default_jobs() for the process (CLI --jobs). 0 restores the
// environment-derived default.
void set_default_jobs(int jobs);

// Runs fn(i) for i in [0, count). Each index must write only to its own
// output slot; results are then combined by the caller in index order, so
// output is identical for every worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int jobs = 0);

}  // namespace ltpmor
