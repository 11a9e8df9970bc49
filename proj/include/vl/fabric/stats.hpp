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

#include <array>
#include <cstdint>
#include <string_view>

#include "vl/fabric/types.hpp"

namespace vl::fabric {

/// Power-of-two bucketed latency histogram; bucket k holds [2^k, 2^(k+1)).
struct LatencyHistogram {
  static constexpr std::size_t kBuckets = 24;
  std::array<std::uint64_t, kBuckets> buckets{};
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
  Cycle max = 0;

  void add(Cycle latency) noexcept;
  double mean() const noexcept { return count == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(count); }
  bool operator==(const LatencyHistogram&) const = default;
};

enum class OpKind : std::uint8_t { Load, Store, Rmw, Select, Push, Fetch, Evict, Count };

constexpr std::string_view to_string(OpKind k) noexcept {
  switch (k) {
    case OpKind::Load: return "load";
    case OpKind::Store: return "store";
    case OpKind::Rmw: return "rmw";
    case OpKind::Select: return "select";
    case OpKind::Push: return "push";
    case OpKind::Fetch: return "fetch";
    case OpKind::Evict: return "evict";
    case OpKind::Count: break;
  }
  return "?";
}

/// Coherence and memory-system event counts. All fields are monotonic
/// within a run.
struct StatCounters {
  std::uint64_t snoops = 0;            // remote caches probed
  std::uint64_t invalidations = 0;     // remote copies killed by a write
  std::uint64_t upgrades_s_to_e = 0;   // S -> M/E on the writer
  std::uint64_t mem_transactions = 0;  // fills from + writebacks to memory
  std::uint64_t cycles = 0;            // latest cycle observed

  std::uint64_t l1_hits = 0;
  std::uint64_t l1_misses = 0;
  std::uint64_t mem_fills = 0;
  std::uint64_t writebacks = 0;
  std::uint64_t injections_accepted = 0;
  std::uint64_t injections_rejected = 0;

  std::array<LatencyHistogram, static_cast<std::size_t>(OpKind::Count)> op_latencies{};

  const LatencyHistogram& latency(OpKind k) const { return op_latencies[static_cast<std::size_t>(k)]; }
  LatencyHistogram& latency(OpKind k) { return op_latencies[static_cast<std::size_t>(k)]; }

  bool operator==(const StatCounters&) const = default;
};

}  // namespace vl::fabric
