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

#include "vl/isa/isa.hpp"

namespace vl::isa {

VlIsa::VlIsa(sim::Scheduler& sched, fabric::Fabric& fabric, vlrd::Vlrd& device, vlrd::AddressLayout layout)
    : sched_(sched), fabric_(fabric), device_(device), layout_(layout), cores_(fabric.config().num_cores) {
  layout_.validate();
  if (layout_.num_sqi() < device_.config().num_sqi) {
    throw IsaFault("address layout cannot name every SQI of the device");
  }
  fabric_.set_sync_hook([this](Cycle now) { sync(now); });
}

void VlIsa::sync(Cycle now) {
  if (now > 0) device_.advance_to(now - 1);
}

std::uint32_t VlIsa::sqi_of(Addr device_addr) const {
  const auto f = layout_.decode(device_addr);
  if (!f || f->vlrd != 0 || f->sqi >= device_.config().num_sqi) {
    throw IsaFault("address does not decode to a SQI on the routing device");
  }
  return f->sqi;
}

std::optional<Addr> VlIsa::take_latch(CoreId core) {
  auto& st = cores_.at(core);
  auto pa = st.latched_pa;
  if (pa) fabric_.set_selected(core, *pa, false);
  st.latched_pa.reset();
  return pa;
}

sim::Task<void> VlIsa::select(CoreId core, Addr va) {
  auto& st = cores_.at(core);
  const Cycle lat = fabric_.acquire_exclusive(core, va, sched_.now());
  if (st.latched_pa && *st.latched_pa != va) fabric_.set_selected(core, *st.latched_pa, false);
  fabric_.set_selected(core, va, true);
  st.latched_pa = va;
  ++stats_.selects;
  co_await sched_.sleep(lat);
}

sim::Task<VlStatus> VlIsa::push(CoreId core, Addr device_addr) {
  const std::uint32_t sqi = sqi_of(device_addr);
  const auto pa = take_latch(core);
  if (!pa) {
    ++stats_.no_select;
    co_await sched_.sleep(1);
    co_return VlStatus::NoSelect;
  }
  auto& st = cores_[core];
  const Line data = fabric_.peek(*pa);
  const Cycle issue = sched_.now();
  const Cycle rt = fabric_.config().lat_vlrd_roundtrip;
  const Cycle ow = fabric_.config().vlrd_one_way();
  ++st.pushes_in_flight;
  ++stats_.pushes;

  co_await sched_.sleep(ow);
  sync(sched_.now());
  const auto r = device_.accept_producer_packet(sqi, data, sched_.now());
  co_await sched_.sleep(r.accepted_at + (rt - ow) - sched_.now());

  --st.pushes_in_flight;
  fabric_.note_op_latency(fabric::OpKind::Push, sched_.now() - issue);
  if (r.status == vlrd::Status::Nack) {
    ++stats_.push_nacks;
    co_return VlStatus::Nack;
  }
  fabric_.zero_owned(core, *pa, sched_.now());
  co_return VlStatus::Ok;
}

sim::Task<VlStatus> VlIsa::fetch(CoreId core, Addr device_addr) {
  const std::uint32_t sqi = sqi_of(device_addr);
  const auto pa = take_latch(core);
  if (!pa) {
    ++stats_.no_select;
    co_await sched_.sleep(1);
    co_return VlStatus::NoSelect;
  }
  const Cycle issue = sched_.now();
  const Cycle rt = fabric_.config().lat_vlrd_roundtrip;
  const Cycle ow = fabric_.config().vlrd_one_way();
  fabric_.set_pushable(core, *pa, true);
  ++stats_.fetches;

  co_await sched_.sleep(ow);
  sync(sched_.now());
  const auto r = device_.accept_consumer_request(sqi, *pa, core, sched_.now());
  co_await sched_.sleep(r.accepted_at + (rt - ow) - sched_.now());

  fabric_.note_op_latency(fabric::OpKind::Fetch, sched_.now() - issue);
  if (r.status == vlrd::Status::Nack) {
    fabric_.set_pushable(core, *pa, false);
    ++stats_.fetch_nacks;
    co_return VlStatus::Nack;
  }
  co_return VlStatus::Ok;
}

void VlIsa::context_swap(CoreId core) {
  auto& st = cores_.at(core);
  if (st.pushes_in_flight > 0) throw IsaFault("context swap with a push in flight");
  st.latched_pa.reset();
  fabric_.clear_selected_all(core);
  fabric_.clear_pushable_all(core);
}

}  // namespace vl::isa
