#ifndef STABLEPRED_PARALLEL_HPP
#define STABLEPRED_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace stablepred {

// Worker cap: STABLE_PREDICT_THREADS if set (>=1), else hardware concurrency.
int max_threads();

// Runs fn(i) for i in [0, n), chunked over max_threads() workers. Results must
// be written to preassigned slots so the outcome is independent of scheduling.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace stablepred

#endif
