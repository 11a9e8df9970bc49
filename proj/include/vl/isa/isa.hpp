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

#include "vl/fabric/fabric.hpp"
#include "vl/sim/scheduler.hpp"
#include "vl/sim/task.hpp"
#include "vl/vlrd/address.hpp"
#include "vl/vlrd/vlrd.hpp"

namespace vl::isa {

/// Status word returned by vl_push / vl_fetch.
enum class VlStatus : std::uint64_t { Ok = 0, NoSelect = 1, Nack = 2 };

class IsaFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct CoreVlState {
  std::optional<Addr> latched_pa;
  std::uint32_t pushes_in_flight = 0;
};

struct IsaStats {
  std::uint64_t selects = 0, pushes = 0, fetches = 0;
  std::uint64_t push_nacks = 0, fetch_nacks = 0, no_select = 0;
};

/// Executes the three queue instructions for every core against one fabric
/// and one routing device, and keeps the device in step with the timeline.
/// Virtual and physical addresses are identical in this model.
class VlIsa {
 public:
  VlIsa(sim::Scheduler& sched, fabric::Fabric& fabric, vlrd::Vlrd& device, vlrd::AddressLayout layout);

  /// Brings `va` into L1 with write permission, marks it selected and
  /// latches its address.
  sim::Task<void> select(CoreId core, Addr va);
  /// Sends the selected line to the device; on ACK the line is zeroed.
  sim::Task<VlStatus> push(CoreId core, Addr device_addr);
  /// Arms the selected line and registers it as demand with the device.
  sim::Task<VlStatus> fetch(CoreId core, Addr device_addr);
  /// Drops the latch and every pushable bit. Faults if a push is in flight.
  void context_swap(CoreId core);

  /// Ticks the device through the cycle before `now`.
  void sync(Cycle now);

  const CoreVlState& state(CoreId core) const { return cores_.at(core); }
  const IsaStats& stats() const noexcept { return stats_; }
  const vlrd::AddressLayout& layout() const noexcept { return layout_; }
  sim::Scheduler& scheduler() noexcept { return sched_; }
  fabric::Fabric& fabric() noexcept { return fabric_; }
  vlrd::Vlrd& device() noexcept { return device_; }

 private:
  std::uint32_t sqi_of(Addr device_addr) const;
  std::optional<Addr> take_latch(CoreId core);

  sim::Scheduler& sched_;
  fabric::Fabric& fabric_;
  vlrd::Vlrd& device_;
  vlrd::AddressLayout layout_;
  std::vector<CoreVlState> cores_;
  IsaStats stats_;
};

}  // namespace vl::isa
