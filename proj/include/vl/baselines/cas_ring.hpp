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
#include <optional>
#include <stdexcept>
#include <vector>

#include "vl/fabric/core.hpp"
#include "vl/fabric/fabric.hpp"

namespace vl::baselines {

using Payload = std::vector<std::uint8_t>;

enum class QueueStatus { Ok, Full };

class QueueError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CasRingOptions {
  std::uint32_t capacity = 256;
  /// Never reuses a slot: every push lands on a fresh line, like a
  /// node-allocating list queue that grows into memory.
  bool unbounded = false;
  std::uint64_t unbounded_lines = std::uint64_t{1} << 20;
};

struct CasRingStats {
  std::uint64_t pushes = 0, pops = 0, full = 0, empty = 0, cas_failures = 0;
};

/// Bounded MPMC ring with a per-slot turn word (Vyukov style). Head and
/// tail counters sit on their own lines; each slot is one line holding a
/// length byte, up to 55 payload bytes, and the turn word in the last 8 B.
class CasRingQueue {
 public:
  static constexpr std::size_t kMaxPayload = 55;
  static constexpr std::size_t kTurnWord = 7;

  CasRingQueue(fabric::AddressSpace& space, CasRingOptions opts = {});

  sim::Task<QueueStatus> push(fabric::Core& core, Payload payload);
  sim::Task<std::optional<Payload>> pop(fabric::Core& core);

  Addr head_addr() const noexcept { return head_; }
  Addr tail_addr() const noexcept { return tail_; }
  Addr slot_addr(std::uint64_t pos) const noexcept { return slots_ + index(pos) * kLineBytes; }
  /// True for the counter lines and every slot line.
  bool owns(Addr a) const noexcept;
  std::uint64_t capacity() const noexcept { return capacity_; }
  bool unbounded() const noexcept { return unbounded_; }
  const CasRingStats& stats() const noexcept { return stats_; }

 private:
  std::uint64_t index(std::uint64_t pos) const noexcept { return unbounded_ ? pos : pos % capacity_; }

  std::uint64_t capacity_;
  bool unbounded_;
  Addr head_, tail_, slots_;
  std::uint64_t slot_lines_;
  CasRingStats stats_;
};

}  // namespace vl::baselines
