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

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vl/baselines/cas_ring.hpp"
#include "vl/baselines/lock_queue.hpp"
#include "vl/endpoints/endpoint.hpp"

namespace vl::workloads {

using Payload = std::vector<std::uint8_t>;

/// Queue implementation behind every channel of a run.
///  vl            routing device + endpoints
///  cas           bounded CAS ring
///  cas_unbounded CAS ring that never reuses slot lines
///  lock          lock-guarded ring
enum class Backend { Vl, Cas, CasUnbounded, Lock };

std::string_view to_string(Backend b) noexcept;
Backend parse_backend(std::string_view s);

/// One simulated machine: timeline, fabric, routing device, and one core
/// handle per hardware core.
struct System {
  explicit System(const fabric::SimConfig& config, vlrd::VlrdConfig device = {});

  fabric::SimConfig config;
  sim::Scheduler sched;
  fabric::Fabric fab;
  fabric::AddressSpace space;
  vlrd::Vlrd dev;
  isa::VlIsa vl;
  endpoints::VlRuntime rt;
  std::vector<fabric::Core> cores;

  fabric::Core& core(CoreId c) { return cores.at(c); }
};

}  // namespace vl::workloads
