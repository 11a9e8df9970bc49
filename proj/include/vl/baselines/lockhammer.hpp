/*
 * Copyright 2026 The vlsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "vl/baselines/locks.hpp"
#include "vl/fabric/config.hpp"
#include "vl/fabric/stats.hpp"

namespace vl::baselines {

struct LockhammerOptions {
  std::uint32_t iterations = 200;  // per thread
  Cycle critical_cycles = 0;
  Cycle post_release_cycles = 0;
};

struct LockhammerRow {
  std::uint32_t cores = 0;
  double cycles_per_lock = 0;  // mean over threads of elapsed / iterations
  double ns_per_lock = 0;
  Cycle wall_cycles = 0;
  fabric::StatCounters stats;
};

/// One fresh fabric per core count; every thread acquires and releases the
/// same lock `iterations` times.
std::vector<LockhammerRow> lockhammer_sweep(const fabric::SimConfig& config, LockKind kind,
                                            const std::vector<std::uint32_t>& core_counts,
                                            const LockhammerOptions& opts = {});

/// Steady-state time for one line to move between two cores that alternately
/// write and read it with no synchronization, in cycles.
double unsynchronized_transfer_cycles(const fabric::SimConfig& config, std::uint32_t rounds = 64);

}  // namespace vl::baselines
