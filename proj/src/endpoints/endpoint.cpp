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

#include "vl/endpoints/endpoint.hpp"

#include <algorithm>

namespace vl::endpoints {

Endpoint::Endpoint(isa::VlIsa& vl, CoreId owner, std::uint32_t sqi, Role role, DeviceAddress fields,
                   Addr ring_base, EndpointOptions opts)
    : vl_(&vl),
      core_(vl.scheduler(), vl.fabric(), owner),
      owner_(owner),
      sqi_(sqi),
      role_(role),
      fields_(fields),
      device_addr_(vl.layout().encode(fields)),
      arm_depth_(opts.arm_depth == 0 ? opts.ring_lines : std::min(opts.arm_depth, opts.ring_lines)) {
  if (opts.ring_lines == 0) throw RegistryError("endpoint ring needs at least one line");
  for (std::uint32_t i = 0; i < opts.ring_lines; ++i) ring_.push_back(ring_base + i * kLineBytes);
  idle_.assign(ring_.begin(), ring_.end());
}

sim::Task<EnqueueStatus> Endpoint::enqueue(Payload payload) {
  if (role_ != Role::Producer) throw RegistryError("enqueue on a consumer endpoint");
  const Line msg = encode_control(payload);
  const Addr line = ring_[cursor_];
  co_await core_.store(line, msg);
  co_await vl_->select(owner_, line);
  // A swap between select and push surfaces as NoSelect; either way the
  // line still holds the message and the caller retries.
  if (co_await vl_->push(owner_, device_addr_) != isa::VlStatus::Ok) {
    ++stats_.full;
    co_return EnqueueStatus::Full;
  }
  cursor_ = (cursor_ + 1) % static_cast<std::uint32_t>(ring_.size());
  ++stats_.enqueued;
  co_return EnqueueStatus::Ok;
}

sim::Task<bool> Endpoint::arm(Addr line) {
  co_await vl_->select(owner_, line);
  if (co_await vl_->fetch(owner_, device_addr_) != isa::VlStatus::Ok) {
    ++stats_.arm_nacks;
    idle_.push_front(line);
    co_return false;
  }
  ++stats_.arms;
  armed_.push_back(line);
  co_return true;
}

sim::Task<void> Endpoint::top_up() {
  while (armed_.size() < arm_depth_ && !idle_.empty()) {
    const Addr line = idle_.front();
    idle_.pop_front();
    if (!co_await arm(line)) break;
  }
}

sim::Task<std::optional<Payload>> Endpoint::dequeue() {
  if (role_ != Role::Consumer) throw RegistryError("dequeue on a producer endpoint");
  while (!armed_.empty()) {
    const Addr line = armed_.front();
    // Sampled before the load: an injection landing during the load's
    // latency must not make a full line look rejected.
    const bool was_armed = vl_->fabric().is_pushable(owner_, line);
    const Line v = co_await core_.load(line);
    if (auto p = decode_control(v)) {
      armed_.pop_front();
      co_await core_.store(line, Line{});
      cursor_ = static_cast<std::uint32_t>((line - ring_.front()) / kLineBytes);
      ++stats_.dequeued;
      co_await arm(line);
      co_return p;
    }
    if (!is_empty_line(v)) throw CodecError("consumer line holds a malformed control region");
    if (was_armed) break;
    // Lost its arm (swap, eviction): the device forwarded its data onward.
    armed_.pop_front();
    idle_.push_back(line);
    ++stats_.rearms_after_reject;
  }
  co_await top_up();
  ++stats_.empty_polls;
  co_return std::nullopt;
}

VlRuntime::VlRuntime(isa::VlIsa& vl, fabric::AddressSpace& space)
    : vl_(&vl), space_(&space), registry_(vl.device().config().num_sqi) {}

Endpoint VlRuntime::map(std::uint32_t sqi, Prot prot, CoreId core, EndpointOptions opts) {
  const DeviceAddress f = registry_.map(sqi, prot);
  const Addr base = space_->alloc_private(core, std::size_t{opts.ring_lines} * kLineBytes);
  return Endpoint(*vl_, core, sqi, role_for(prot), f, base, opts);
}

}  // namespace vl::endpoints
