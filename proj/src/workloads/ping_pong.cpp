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

namespace vl::workloads::detail {

namespace {

std::uint64_t reply_of(std::uint64_t v) { return v * 2654435761u + 1; }

sim::Task<void> pinger(Run& run, Port& out, Port& in, Digest& d) {
  for (std::uint64_t i = 0; i < run.spec.messages; ++i) {
    co_await run.send(out, run.pack({i}));
    const Payload r = co_await run.recv(in);
    const std::uint64_t v = Run::word(r, 0);
    check(v == reply_of(i), "ping_pong: reply out of order");
    d.add(v);
    co_await run.compute(in.core());
  }
}

sim::Task<void> ponger(Run& run, Port& in, Port& out) {
  for (std::uint64_t i = 0; i < run.spec.messages; ++i) {
    const Payload m = co_await run.recv(in);
    co_await run.compute(in.core());
    co_await run.send(out, run.pack({reply_of(Run::word(m, 0))}));
  }
}

}  // namespace

BenchResult run_ping_pong(const WorkloadSpec& spec) {
  Run run(spec, 2);
  run.plan_consumers(2);
  Channel& ping = run.add("ping", {0}, {1});
  Channel& pong = run.add("pong", {1}, {0});
  Digest d;
  run.sys.sched.spawn(pinger(run, ping.producer(0), pong.consumer(0), d));
  run.sys.sched.spawn(ponger(run, ping.consumer(0), pong.producer(0)));
  auto r = run.finish(d);
  r.extra["cycles_per_round_trip"] = static_cast<double>(r.wall_cycles) / spec.messages;
  return r;
}

}  // namespace vl::workloads::detail
