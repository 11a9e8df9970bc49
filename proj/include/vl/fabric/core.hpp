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
#include <cstring>
#include <span>

#include "vl/fabric/fabric.hpp"
#include "vl/sim/scheduler.hpp"
#include "vl/sim/task.hpp"

namespace vl::fabric {

/// Awaitable view of one core: each call issues the fabric operation at the
/// current cycle and then suspends for the latency it reports.
class Core {
 public:
  Core(sim::Scheduler& sched, Fabric& fabric, CoreId id) : sched_(&sched), fabric_(&fabric), id_(id) {}

  CoreId id() const noexcept { return id_; }
  sim::Scheduler& scheduler() const noexcept { return *sched_; }
  Fabric& fabric() const noexcept { return *fabric_; }
  Cycle now() const noexcept { return sched_->now(); }

  sim::Task<Line> load(Addr addr) {
    const auto r = fabric_->core_load(id_, addr, sched_->now());
    co_await sched_->sleep(r.latency);
    co_return r.value;
  }

  sim::Task<std::uint64_t> load_word(Addr addr, std::size_t word) {
    const auto r = fabric_->core_load(id_, addr, sched_->now());
    co_await sched_->sleep(r.latency);
    co_return vl::load_word(r.value, word);
  }

  sim::Task<void> store(Addr addr, Line value) {
    const Cycle lat = fabric_->core_store(id_, addr, value, sched_->now());
    co_await sched_->sleep(lat);
  }

  /// Read-modify-write of one aligned word inside the line.
  sim::Task<void> store_word(Addr addr, std::size_t word, std::uint64_t value) {
    std::uint8_t bytes[kWordBytes];
    std::memcpy(bytes, &value, kWordBytes);
    const Cycle lat = fabric_->core_store_bytes(id_, addr, word * kWordBytes, std::span<const std::uint8_t>(bytes),
                                                sched_->now());
    co_await sched_->sleep(lat);
  }

  sim::Task<RmwResult> cas(Addr addr, std::size_t word, std::uint64_t expected, std::uint64_t desired) {
    const auto r = fabric_->core_rmw(id_, addr, word, expected, desired, sched_->now());
    co_await sched_->sleep(r.latency);
    co_return r;
  }

  sim::Task<void> evict(Addr addr) {
    const Cycle lat = fabric_->evict(id_, addr, sched_->now());
    co_await sched_->sleep(lat);
  }

  /// Local work with no memory traffic.
  sim::Scheduler::SleepAwaiter compute(Cycle cycles) { return sched_->sleep(cycles); }

 private:
  sim::Scheduler* sched_;
  Fabric* fabric_;
  CoreId id_;
};

}  // namespace vl::fabric
