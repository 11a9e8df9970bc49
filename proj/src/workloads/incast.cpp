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

namespace {

/// Coherence counters while every source is still pushing.
struct SteadyWindow {
  bool closed = false;
  fabric::StatCounters stats;
  std::uint64_t pushes = 0;
  Cycle accepted_cycles = 0;
};

void close_window(Run& run, Channel& ch, SteadyWindow& w) {
  if (w.closed) return;
  w.closed = true;
  w.stats = run.sys.fab.snapshot_stats();
  for (std::size_t p = 0; p < ch.num_producers(); ++p) {
    w.pushes += ch.producer(p).sent;
    w.accepted_cycles += ch.producer(p).accepted_send_cycles;
  }
}

sim::Task<void> source(Run& run, Channel& ch, std::size_t id, std::uint32_t count, bool work, Cycle& push_cycles,
                       SteadyWindow& window) {
  Port& out = ch.producer(id);
  // Seeded start skew and think time break lock-step phases between sources.
  co_await run.sys.sched.sleep(run.jitter() % 64);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (work) co_await run.compute(out.core());
    else co_await run.sys.sched.sleep(run.jitter() % 57);
    const Cycle t0 = run.sys.sched.now();
    co_await run.send(out, run.pack({id, i}));
    push_cycles += run.sys.sched.now() - t0;
  }
  close_window(run, ch, window);
}

// Checks per-source order and folds each source's stream into its own digest.
sim::Task<void> sink(Run& run, Port& in, std::uint64_t total, std::vector<std::uint64_t>& next,
                     std::vector<Digest>& per_source) {
  for (std::uint64_t n = 0; n < total; ++n) {
    const Payload m = co_await run.recv(in);
    const auto id = Run::word(m, 0), seq = Run::word(m, 1);
    check(id < next.size() && next[id] == seq, run.spec.name + ": per-producer order violated");
    ++next[id];
    per_source[id].add(seq ^ (id << 40));
    co_await run.compute(in.core());
  }
}

BenchResult fan_in(const WorkloadSpec& spec, std::uint32_t producers, std::uint32_t per_producer, bool producer_work) {
  Run run(spec, producers + 1);
  run.plan_consumers(1);
  std::vector<CoreId> srcs;
  for (CoreId c = 0; c < producers; ++c) srcs.push_back(c);
  const CoreId sink_core = producers;
  Channel& ch = run.add(spec.name, srcs, {sink_core});
  std::vector<std::uint64_t> next(producers, 0);
  std::vector<Digest> per_source(producers);
  std::vector<Cycle> push_cycles(producers, 0);
  SteadyWindow window;
  for (std::uint32_t p = 0; p < producers; ++p) {
    run.sys.sched.spawn(source(run, ch, p, per_producer, producer_work, push_cycles[p], window));
  }
  run.sys.sched.spawn(sink(run, ch.consumer(0), std::uint64_t{producers} * per_producer, next, per_source));
  Digest d;
  auto r = run.finish(d);
  for (const auto& ps : per_source) d.add(ps.h);
  r.checksum = d.h;
  Cycle total = 0;
  for (Cycle c : push_cycles) total += c;
  const double pushes = static_cast<double>(producers) * per_producer;
  // Per-push figures cover the span in which all sources contend.
  const double steady = static_cast<double>(std::max<std::uint64_t>(1, window.pushes));
  r.extra["cycles_per_push"] = static_cast<double>(window.accepted_cycles) / steady;
  r.extra["cycles_per_send"] = static_cast<double>(total) / pushes;
  r.extra["invalidations_per_push"] = static_cast<double>(window.stats.invalidations) / steady;
  r.extra["upgrades_per_push"] = static_cast<double>(window.stats.upgrades_s_to_e) / steady;
  r.extra["snoops_per_push"] = static_cast<double>(window.stats.snoops) / steady;
  r.extra["producers"] = producers;
  return r;
}

}  // namespace

BenchResult run_incast(const WorkloadSpec& spec) {
  const std::uint32_t producers = spec.threads ? spec.threads - 1 : 15;
  return fan_in(spec, producers, spec.messages, true);
}

// Producers push back to back; only the consumer does per-message work.
BenchResult run_producer_scaling(const WorkloadSpec& spec) {
  const std::uint32_t producers = spec.threads ? spec.threads - 1 : 15;
  return fan_in(spec, producers, spec.messages, false);
}

}  // namespace vl::workloads::detail
