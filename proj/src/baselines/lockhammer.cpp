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

#include "vl/baselines/lockhammer.hpp"

#include <stdexcept>

namespace vl::baselines {

namespace {

sim::Task<void> hammer(sim::Scheduler& sched, Lock& lock, fabric::Core& core, LockhammerOptions opts,
                       Cycle& finished) {
  for (std::uint32_t i = 0; i < opts.iterations; ++i) {
    co_await lock.acquire(core);
    if (opts.critical_cycles) co_await core.compute(opts.critical_cycles);
    co_await lock.release(core);
    if (opts.post_release_cycles) co_await core.compute(opts.post_release_cycles);
  }
  finished = sched.now();
}

// Two cores take turns: one stores to the line, then the other loads it.
// Each load finds the line Modified in the peer's cache.
sim::Task<void> ping(sim::Scheduler& sched, fabric::Core& a, fabric::Core& b, Addr line, std::uint32_t rounds,
                     Cycle& load_cycles) {
  for (std::uint32_t r = 0; r < rounds; ++r) {
    fabric::Core& w = (r % 2 == 0) ? a : b;
    fabric::Core& rd = (r % 2 == 0) ? b : a;
    co_await w.store_word(line, 0, r + 1);
    const Cycle t0 = sched.now();
    co_await rd.load_word(line, 0);
    load_cycles += sched.now() - t0;
  }
}

}  // namespace

std::vector<LockhammerRow> lockhammer_sweep(const fabric::SimConfig& config, LockKind kind,
                                            const std::vector<std::uint32_t>& core_counts,
                                            const LockhammerOptions& opts) {
  std::vector<LockhammerRow> rows;
  for (const std::uint32_t n : core_counts) {
    if (n == 0 || n > config.num_cores) throw std::invalid_argument("lockhammer core count out of range");
    sim::Scheduler sched;
    fabric::Fabric fab(config);
    fabric::AddressSpace space;
    Lock lock(kind, space);
    std::vector<fabric::Core> cores;
    std::vector<Cycle> finished(n, 0);
    for (std::uint32_t c = 0; c < n; ++c) cores.emplace_back(sched, fab, c);
    for (std::uint32_t c = 0; c < n; ++c) sched.spawn(hammer(sched, lock, cores[c], opts, finished[c]));
    sched.run();
    LockhammerRow row;
    row.cores = n;
    double sum = 0;
    for (Cycle f : finished) sum += static_cast<double>(f) / opts.iterations;
    row.cycles_per_lock = sum / n;
    row.ns_per_lock = config.to_ns(row.cycles_per_lock);
    row.wall_cycles = sched.now();
    fab.note_cycle(sched.now());
    row.stats = fab.snapshot_stats();
    rows.push_back(row);
  }
  return rows;
}

double unsynchronized_transfer_cycles(const fabric::SimConfig& config, std::uint32_t rounds) {
  if (config.num_cores < 2) throw std::invalid_argument("transfer calibration needs two cores");
  sim::Scheduler sched;
  fabric::Fabric fab(config);
  fabric::AddressSpace space;
  const Addr line = space.alloc_shared(kLineBytes);
  fabric::Core a(sched, fab, 0), b(sched, fab, 1);
  Cycle load_cycles = 0;
  sched.spawn(ping(sched, a, b, line, rounds, load_cycles));
  sched.run();
  return static_cast<double>(load_cycles) / rounds;
}

}  // namespace vl::baselines
