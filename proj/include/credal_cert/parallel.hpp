#pragma once

#include <cstddef>
#include <functional>

namespace credal_cert {

// Worker count used by parallel_for. Defaults to 1.
void set_thread_count(std::size_t threads);
std::size_t thread_count();

// Runs body(i) for every i in [begin, end) using static contiguous chunks.
// Callers must make body(i) write only to slot i so the result does not
// depend on scheduling.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace credal_cert
