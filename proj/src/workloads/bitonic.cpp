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

#include <algorithm>
#include <numeric>
#include <random>

#include "common.hpp"

namespace vl::workloads::detail {

namespace {

// A task is one compare-exchange: word 0 packs (i | dir << 15, l, a[i], a[l])
// as four 16-bit fields; the reply carries (i, l, new a[i], new a[l]).
std::uint64_t pack16(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return a | b << 16 | c << 32 | d << 48;
}
std::uint64_t field(std::uint64_t w, int k) { return (w >> (16 * k)) & 0xffff; }

sim::Task<void> master(Run& run, Port& dispatch, Port& collect, std::vector<std::uint64_t>& a, std::uint32_t workers) {
  const std::size_t n = a.size();
  for (std::size_t k = 2; k <= n; k <<= 1) {
    for (std::size_t j = k >> 1; j > 0; j >>= 1) {
      std::size_t issued = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t l = i ^ j;
        if (l <= i) continue;
        const std::uint64_t descending = (i & k) != 0;
        co_await run.send(dispatch, run.pack({pack16(i | descending << 15, l, a[i], a[l])}));
        ++issued;
      }
      for (std::size_t t = 0; t < issued; ++t) {
        const std::uint64_t w = Run::word(co_await run.recv(collect), 0);
        a[field(w, 0)] = field(w, 2);
        a[field(w, 1)] = field(w, 3);
      }
    }
  }
  // Stop every worker.
  for (std::uint32_t w = 0; w < workers; ++w) co_await run.send(dispatch, run.pack({~std::uint64_t{0}}));
}

sim::Task<void> worker(Run& run, Port& dispatch, Port& collect) {
  for (;;) {
    const std::uint64_t t = Run::word(co_await run.recv(dispatch), 0);
    if (t == ~std::uint64_t{0}) break;
    const std::uint64_t i = field(t, 0) & 0x7fff, desc = field(t, 0) >> 15, l = field(t, 1);
    std::uint64_t x = field(t, 2), y = field(t, 3);
    if ((x > y) != (desc != 0)) std::swap(x, y);
    co_await run.compute(dispatch.core());
    co_await run.send(collect, run.pack({pack16(i, l, x, y)}));
  }
}

}  // namespace

BenchResult run_bitonic(const WorkloadSpec& spec) {
  const std::uint32_t threads = spec.threads ? spec.threads : spec.sim.num_cores;
  check(threads >= 2, "bitonic: needs a master and at least one worker");
  check(spec.elements >= 2 && std::has_single_bit(spec.elements) && spec.elements <= (1u << 15),
        "bitonic: elements must be a power of two up to 32768");
  Run run(spec, threads);
  const std::uint32_t workers = threads - 1;
  run.plan_consumers(threads);
  std::vector<CoreId> ws;
  for (CoreId c = 1; c <= workers; ++c) ws.push_back(c);
  Channel& dispatch = run.add("bitonic_dispatch", {0}, ws);
  Channel& collect = run.add("bitonic_collect", ws, {0});

  // Seed 0 gives the reversed sequence; other seeds a shuffled one.
  std::vector<std::uint64_t> a(spec.elements);
  std::iota(a.begin(), a.end(), 1);
  if (spec.seed == 0) {
    std::reverse(a.begin(), a.end());
  } else {
    std::mt19937_64 rng(spec.seed);
    std::shuffle(a.begin(), a.end(), rng);
  }
  run.sys.sched.spawn(master(run, dispatch.producer(0), collect.consumer(0), a, workers));
  for (std::uint32_t w = 0; w < workers; ++w) run.sys.sched.spawn(worker(run, dispatch.consumer(w), collect.producer(w)));
  Digest d;
  auto r = run.finish(d);
  check(std::is_sorted(a.begin(), a.end()), "bitonic: output is not sorted");
  for (auto v : a) d.add(v);
  r.checksum = d.h;
  r.extra["workers"] = workers;
  return r;
}

}  // namespace vl::workloads::detail
