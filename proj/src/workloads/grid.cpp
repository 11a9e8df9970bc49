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

#include <array>
#include <map>
#include <optional>

#include "common.hpp"

namespace vl::workloads::detail {

namespace {

constexpr int kSide = 4;
constexpr int kCells = kSide * kSide;

// Neighbor directions: 0 west, 1 east, 2 north, 3 south.
constexpr std::array<int, 4> kDx = {-1, 1, 0, 0};
constexpr std::array<int, 4> kDy = {0, 0, -1, 1};

std::optional<int> neighbor(int cell, int dir) {
  const int x = cell % kSide + kDx[dir], y = cell / kSide + kDy[dir];
  if (x < 0 || y < 0 || x >= kSide || y >= kSide) return std::nullopt;
  return y * kSide + x;
}

int opposite(int dir) { return dir ^ 1; }

std::uint64_t initial(int cell, std::uint64_t seed) { return (seed + 1) * 0x9e3779b97f4a7c15ull ^ (cell * 977u); }

std::uint64_t mix(std::uint64_t v, std::uint64_t in, int dir) { return v * 31 + in * (2 * dir + 3); }

/// out[c][d] is the port cell c sends on toward direction d; in[c][d] the
/// port it receives on from direction d.
struct Mesh {
  std::array<std::array<Port*, 4>, kCells> out{}, in{};
};

Mesh build_mesh(Run& run, const std::string& prefix) {
  run.plan_consumers(48);
  Mesh m;
  for (int c = 0; c < kCells; ++c) {
    for (int d = 0; d < 4; ++d) {
      const auto n = neighbor(c, d);
      if (!n) continue;
      Channel& ch = run.add(prefix + "_" + std::to_string(c) + "_" + std::to_string(*n), {static_cast<CoreId>(c)},
                            {static_cast<CoreId>(*n)});
      m.out[c][d] = &ch.producer(0);
      m.in[*n][opposite(d)] = &ch.consumer(0);
    }
  }
  return m;
}

// ---- halo: every iteration exchanges with all neighbors ----

std::array<std::uint64_t, kCells> halo_reference(std::uint32_t iters, std::uint64_t seed) {
  std::array<std::uint64_t, kCells> v{};
  for (int c = 0; c < kCells; ++c) v[c] = initial(c, seed);
  for (std::uint32_t it = 0; it < iters; ++it) {
    auto next = v;
    for (int c = 0; c < kCells; ++c) {
      for (int d = 0; d < 4; ++d) {
        if (auto n = neighbor(c, d)) next[c] = mix(next[c], v[*n], d);
      }
    }
    v = next;
  }
  return v;
}

sim::Task<void> halo_cell(Run& run, const Mesh& m, int c, std::uint64_t& value) {
  std::uint64_t v = initial(c, run.spec.seed);
  for (std::uint32_t it = 0; it < run.spec.messages; ++it) {
    for (int d = 0; d < 4; ++d) {
      if (m.out[c][d]) co_await run.send(*m.out[c][d], run.pack({v}));
    }
    std::uint64_t next = v;
    for (int d = 0; d < 4; ++d) {
      if (!m.in[c][d]) continue;
      const Payload p = co_await run.recv(*m.in[c][d]);
      next = mix(next, Run::word(p, 0), d);
    }
    co_await run.compute(static_cast<CoreId>(c));
    v = next;
  }
  value = v;
}

// ---- sweep: wavefronts from the four corners in turn ----

struct SweepDir {
  int from_x, from_y;  // upstream neighbor directions
};

// Iteration k sweeps from corner k % 4; a cell depends on its upstream
// neighbors along x and y.
SweepDir sweep_dir(std::uint32_t k) {
  switch (k % 4) {
    case 0: return {0, 2};  // from the north-west corner
    case 1: return {1, 2};  // north-east
    case 2: return {1, 3};  // south-east
    default: return {0, 3};  // south-west
  }
}

std::array<std::uint64_t, kCells> sweep_reference(std::uint32_t iters, std::uint64_t seed) {
  std::array<std::uint64_t, kCells> v{};
  for (int c = 0; c < kCells; ++c) v[c] = initial(c, seed);
  for (std::uint32_t k = 0; k < iters; ++k) {
    const SweepDir s = sweep_dir(k);
    // Visit cells in an order where upstream cells come first.
    std::array<bool, kCells> done{};
    for (int pass = 0; pass < kCells; ++pass) {
      for (int c = 0; c < kCells; ++c) {
        if (done[c]) continue;
        const auto ux = neighbor(c, s.from_x), uy = neighbor(c, s.from_y);
        if ((ux && !done[*ux]) || (uy && !done[*uy])) continue;
        if (ux) v[c] = mix(v[c], v[*ux], s.from_x);
        if (uy) v[c] = mix(v[c], v[*uy], s.from_y);
        done[c] = true;
      }
    }
  }
  return v;
}

sim::Task<void> sweep_cell(Run& run, const Mesh& m, int c, std::uint64_t& value) {
  std::uint64_t v = initial(c, run.spec.seed);
  for (std::uint32_t k = 0; k < run.spec.messages; ++k) {
    const SweepDir s = sweep_dir(k);
    for (int d : {s.from_x, s.from_y}) {
      if (!m.in[c][d]) continue;
      const Payload p = co_await run.recv(*m.in[c][d]);
      v = mix(v, Run::word(p, 0), d);
    }
    co_await run.compute(static_cast<CoreId>(c));
    // Downstream is the opposite side of each upstream direction.
    for (int d : {opposite(s.from_x), opposite(s.from_y)}) {
      if (m.out[c][d]) co_await run.send(*m.out[c][d], run.pack({v}));
    }
  }
  value = v;
}

using CellFn = sim::Task<void> (*)(Run&, const Mesh&, int, std::uint64_t&);

BenchResult run_grid(const WorkloadSpec& spec, CellFn fn, const std::array<std::uint64_t, kCells>& expect) {
  Run run(spec, kCells);
  const Mesh mesh = build_mesh(run, spec.name);
  std::array<std::uint64_t, kCells> got{};
  for (int c = 0; c < kCells; ++c) run.sys.sched.spawn(fn(run, mesh, c, got[c]));
  Digest d;
  auto r = run.finish(d);
  check(got == expect, spec.name + ": grid values differ from the sequential reference");
  for (auto v : got) d.add(v);
  r.checksum = d.h;
  return r;
}

}  // namespace

BenchResult run_halo(const WorkloadSpec& spec) {
  return run_grid(spec, halo_cell, halo_reference(spec.messages, spec.seed));
}

BenchResult run_sweep(const WorkloadSpec& spec) {
  return run_grid(spec, sweep_cell, sweep_reference(spec.messages, spec.seed));
}

}  // namespace vl::workloads::detail
