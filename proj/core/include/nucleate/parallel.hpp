#pragma once

#include <cstddef>
#include <functional>

namespace nucleate {

// Worker-pool width: min(hardware, NUCLEATE_THREADS env var if set, jobs).
// Re-read on every call so tests can vary the env var.
unsigned worker_count(std::size_t jobs);

// Runs fn(i) for i in [0, jobs). Each index must write only its own output
// slot; results are then independent of scheduling, which is what the
// byte-reproducibility contract relies on.
void parallel_for_indexed(std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace nucleate
