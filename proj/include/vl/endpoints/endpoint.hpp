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
#include <deque>
#include <optional>
#include <vector>

#include "vl/endpoints/registry.hpp"
#include "vl/fabric/core.hpp"
#include "vl/isa/isa.hpp"

namespace vl::endpoints {

using Payload = std::vector<std::uint8_t>;

enum class EnqueueStatus { Ok, Full };

struct EndpointOptions {
  std::uint32_t ring_lines = 8;
  /// Consumer lines kept registered with the device; 0 means the whole ring.
  std::uint32_t arm_depth = 0;
};

struct EndpointStats {
  std::uint64_t enqueued = 0, full = 0;
  std::uint64_t dequeued = 0, empty_polls = 0, arms = 0, arm_nacks = 0, rearms_after_reject = 0;
};

/// A single-owner attachment to one SQI, backed by a private ring of lines.
/// Producers send from the cursor line. Consumers read their armed lines in
/// the order they were registered, which is the order the device fills them.
class Endpoint {
 public:
  Endpoint(isa::VlIsa& vl, CoreId owner, std::uint32_t sqi, Role role, DeviceAddress fields, Addr ring_base,
           EndpointOptions opts);

  sim::Task<EnqueueStatus> enqueue(Payload payload);
  sim::Task<std::optional<Payload>> dequeue();

  std::uint32_t sqi() const noexcept { return sqi_; }
  Role role() const noexcept { return role_; }
  CoreId owner() const noexcept { return owner_; }
  const DeviceAddress& fields() const noexcept { return fields_; }
  Addr device_addr() const noexcept { return device_addr_; }
  const std::vector<Addr>& ring() const noexcept { return ring_; }
  std::uint32_t cursor() const noexcept { return cursor_; }
  std::size_t armed() const noexcept { return armed_.size(); }
  const EndpointStats& stats() const noexcept { return stats_; }

 private:
  sim::Task<bool> arm(Addr line);
  sim::Task<void> top_up();

  isa::VlIsa* vl_;
  fabric::Core core_;
  CoreId owner_;
  std::uint32_t sqi_;
  Role role_;
  DeviceAddress fields_;
  Addr device_addr_;
  std::vector<Addr> ring_;
  std::uint32_t cursor_ = 0;
  std::uint32_t arm_depth_;
  std::deque<Addr> armed_;
  std::deque<Addr> idle_;
  EndpointStats stats_;
};

/// Registry plus buffer allocation: the library surface user code calls.
class VlRuntime {
 public:
  VlRuntime(isa::VlIsa& vl, fabric::AddressSpace& space);

  std::uint32_t open(const std::string& name, OpenMode mode) { return registry_.open(name, mode); }
  void close(const std::string& name) { registry_.close(name); }
  Endpoint map(std::uint32_t sqi, Prot prot, CoreId core, EndpointOptions opts = {});
  void unmap(const Endpoint& ep) { registry_.unmap(ep.fields()); }

  SqiRegistry& registry() noexcept { return registry_; }
  isa::VlIsa& isa() noexcept { return *vl_; }

 private:
  isa::VlIsa* vl_;
  fabric::AddressSpace* space_;
  SqiRegistry registry_;
};

}  // namespace vl::endpoints
