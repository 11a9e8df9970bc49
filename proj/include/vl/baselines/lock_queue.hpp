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

#include "vl/baselines/cas_ring.hpp"
#include "vl/baselines/locks.hpp"

namespace vl::baselines {

struct LockQueueOptions {
  std::uint32_t capacity = 256;
  LockKind lock = LockKind::Ticket;  // TTAS starves the consumer when producers retry on full
};

struct LockQueueStats {
  std::uint64_t pushes = 0, pops = 0, full = 0, empty = 0;
};

/// Bounded ring whose head/tail line and slots are guarded by one lock.
class LockQueue {
 public:
  static constexpr std::size_t kMaxPayload = 63;

  LockQueue(fabric::AddressSpace& space, LockQueueOptions opts = {});

  sim::Task<QueueStatus> push(fabric::Core& core, Payload payload);
  sim::Task<std::optional<Payload>> pop(fabric::Core& core);

  bool owns(Addr a) const noexcept;
  const Lock& lock() const noexcept { return lock_; }
  const LockQueueStats& stats() const noexcept { return stats_; }

 private:
  std::uint64_t capacity_;
  Lock lock_;
  Addr meta_, slots_;
  LockQueueStats stats_;
};

}  // namespace vl::baselines
