//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace gmc {

// Worker count for a job batch: GMC_THREADS when set, otherwise the hardware
// concurrency, never more than the job count.
std::size_t worker_count(std::size_t jobs);

// Runs fn(0..count-1) on a bounded pool. Jobs must be independent; the
// lowest-index exception is rethrown after all workers drain.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace gmc
