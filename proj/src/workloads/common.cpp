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

#include "common.hpp"

#include <algorithm>

namespace vl::workloads::detail {

void check(bool ok, const std::string& what) {
  if (!ok) throw WorkloadError(what);
}

Run::Run(const WorkloadSpec& s, std::uint32_t n) : spec(s), threads(n), sys(s.sim, s.device), jitter(s.seed ^ 0x9e3779b97f4a7c15ull) {
  sys.fab.set_trace(s.trace);
  check(n >= 1 && n <= s.sim.num_cores, spec.name + ": thread count must be 1.." + std::to_string(s.sim.num_cores));
  check(s.payload_bytes >= 8 && s.payload_bytes <= baselines::CasRingQueue::kMaxPayload,
        spec.name + ": payload_bytes must be 8..55");
  check(s.messages >= 1, spec.name + ": messages must be positive");
  opts.queue_capacity = s.queue_capacity;
}

std::uint32_t Run::ring_for(std::size_t consumer_endpoints) const {
  if (spec.ring_lines != 0) return spec.ring_lines;
  const std::size_t budget = sys.dev.config().buf_entries * 3 / 4;
  return static_cast<std::uint32_t>(std::clamp<std::size_t>(budget / std::max<std::size_t>(1, consumer_endpoints), 1, 8));
}

Channel& Run::add(const std::string& name, const std::vector<CoreId>& producers, const std::vector<CoreId>& consumers) {
  channels.push_back(make_channel(sys, spec.backend, name, producers, consumers, opts));
  // Split prodBuf across queues so one backed-up queue cannot block the rest.
  const auto n = static_cast<std::uint32_t>(channels.size());
  if (spec.device.sqi_prod_quota == 0) sys.dev.set_sqi_prod_quota(std::max<std::uint32_t>(1, sys.dev.config().buf_entries / n));
  return *channels.back();
}

Payload Run::pack(std::initializer_list<std::uint64_t> words) const {
  Payload p(std::max<std::size_t>(spec.payload_bytes, words.size() * 8), 0);
  std::size_t i = 0;
  for (std::uint64_t w : words) {
    for (int b = 0; b < 8; ++b) p[i * 8 + b] = static_cast<std::uint8_t>(w >> (8 * b));
    ++i;
  }
  return p;
}

std::uint64_t Run::word(const Payload& p, std::size_t i) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= std::uint64_t{p.at(i * 8 + b)} << (8 * b);
  return v;
}

BenchResult Run::finish(const Digest& output) {
  try {
    sys.sched.run(spec.deadline);
  } catch (const sim::SimulationStall& e) {
    std::string why = spec.name + ": " + e.what() + ";";
    for (const auto& ch : channels) {
      why += " " + ch->name() + " sent=" + std::to_string(ch->sent()) + " delivered=" + std::to_string(ch->delivered());
    }
    why += " prod_buf=" + std::to_string(sys.dev.prod_occupancy()) + " cons_buf=" + std::to_string(sys.dev.cons_occupancy());
    throw WorkloadError(why);
  }
  BenchResult r;
  r.name = spec.name;
  r.backend = spec.backend;
  r.threads = threads;
  r.wall_cycles = sys.sched.now();
  sys.fab.note_cycle(r.wall_cycles);
  r.stats = sys.fab.snapshot_stats();
  r.checksum = output.h;
  for (const auto& ch : channels) {
    check(ch->sent() == ch->delivered(), spec.name + ": channel " + ch->name() + " did not drain");
    r.per_channel_delivered.push_back(ch->delivered());
    r.messages += ch->delivered();
  }
  for (const auto& [addr, rec] : sys.fab.address_records()) {
    if (std::popcount(rec.touched_by) < 2) continue;
    r.shared_line_invalidations += rec.invalidations;
    r.shared_line_upgrades += rec.upgrades;
  }
  if (auto bad = sys.fab.check_invariants()) throw WorkloadError(spec.name + ": " + *bad);
  return r;
}

}  // namespace vl::workloads::detail
