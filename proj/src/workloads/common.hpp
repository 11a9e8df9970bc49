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

#include <bit>
#include <memory>
#include <random>

#include "vl/workloads/workloads.hpp"

namespace vl::workloads::detail {

/// Shared state of one workload run: the machine, its channels, and the
/// bookkeeping every workload reports.
struct Run {
  Run(const WorkloadSpec& spec, std::uint32_t threads);

  /// Ring length that keeps every consumer's armed lines within the
  /// device's request buffer.
  std::uint32_t ring_for(std::size_t consumer_endpoints) const;
  void plan_consumers(std::size_t consumer_endpoints) { opts.vl_ring_lines = ring_for(consumer_endpoints); }

  Channel& add(const std::string& name, const std::vector<CoreId>& producers, const std::vector<CoreId>& consumers);

  sim::Task<void> send(Port& p, Payload m) {
    return workloads::send(sys.sched, p, std::move(m), spec.send_backoff, &jitter);
  }
  sim::Task<Payload> recv(Port& p) { return workloads::recv(sys.sched, p, spec.poll_backoff, &jitter); }
  sim::Task<void> compute(CoreId c) { co_await sys.core(c).compute(spec.compute_cycles); }

  Payload pack(std::initializer_list<std::uint64_t> words) const;
  static std::uint64_t word(const Payload& p, std::size_t i);

  /// Runs the timeline and fills in the generic result fields.
  BenchResult finish(const Digest& output);

  WorkloadSpec spec;
  std::uint32_t threads;
  System sys;
  std::mt19937_64 jitter;  // backoff jitter, seeded from the spec
  ChannelOptions opts;
  std::vector<std::unique_ptr<Channel>> channels;
};

void check(bool ok, const std::string& what);

BenchResult run_ping_pong(const WorkloadSpec& spec);
BenchResult run_halo(const WorkloadSpec& spec);
BenchResult run_sweep(const WorkloadSpec& spec);
BenchResult run_incast(const WorkloadSpec& spec);
BenchResult run_fir(const WorkloadSpec& spec);
BenchResult run_bitonic(const WorkloadSpec& spec);
BenchResult run_producer_scaling(const WorkloadSpec& spec);

}  // namespace vl::workloads::detail
