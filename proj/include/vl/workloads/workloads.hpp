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
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vl/workloads/channel.hpp"

namespace vl::workloads {

class WorkloadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WorkloadSpec {
  std::string name = "ping_pong";
  Backend backend = Backend::Vl;
  std::uint32_t threads = 0;     // 0 = the workload's natural thread count
  std::uint32_t messages = 1000;  // per channel (iterations for the grid codes)
  std::uint32_t payload_bytes = 8;
  Cycle compute_cycles = 20;  // busy work per message handled
  Cycle poll_backoff = 4;
  Cycle send_backoff = 8;
  std::uint32_t elements = 256;  // bitonic input size
  std::uint32_t ring_lines = 0;  // VL endpoint ring, 0 = sized to the device
  std::uint32_t queue_capacity = 256;
  std::uint64_t seed = 1;
  Cycle deadline = 4'000'000'000;
  fabric::SimConfig sim;
  vlrd::VlrdConfig device;
  std::ostream* trace = nullptr;  // fabric event log, if set

  bool operator==(const WorkloadSpec&) const = default;
};

struct BenchResult {
  std::string name;
  Backend backend = Backend::Vl;
  std::uint32_t threads = 0;
  Cycle wall_cycles = 0;
  fabric::StatCounters stats;
  std::vector<std::uint64_t> per_channel_delivered;
  std::uint64_t messages = 0;
  std::uint64_t checksum = 0;
  /// Workload-specific figures (e.g. cycles per push).
  std::map<std::string, double> extra;
  /// Coherence events on lines touched by more than one core.
  std::uint64_t shared_line_invalidations = 0;
  std::uint64_t shared_line_upgrades = 0;
};

const std::vector<std::string>& workload_names();

/// Runs one workload to completion and checks its semantic postcondition.
BenchResult run_workload(const WorkloadSpec& spec);

/// One result per thread count, each on a fresh system.
std::vector<BenchResult> run_scaling(const WorkloadSpec& base, const std::vector<std::uint32_t>& thread_counts);

/// 64-bit FNV-1a, used for order-sensitive output digests.
struct Digest {
  std::uint64_t h = 1469598103934665603ull;
  void add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  }
};

}  // namespace vl::workloads
