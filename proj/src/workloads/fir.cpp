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
#include <random>

#include "common.hpp"

namespace vl::workloads::detail {

namespace {

constexpr int kStages = 4;
constexpr int kTaps = 16;
constexpr int kTapsPerStage = kTaps / kStages;

using Taps = std::array<std::int64_t, kTaps>;

Taps make_taps() {
  Taps h{};
  for (int i = 0; i < kTaps; ++i) h[i] = (i % 5) - 2 + (i == kTaps / 2 ? 7 : 0);
  return h;
}

std::vector<std::int64_t> make_input(std::uint32_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> x(n);
  for (auto& v : x) v = static_cast<std::int64_t>(rng() % 2001) - 1000;
  return x;
}

std::vector<std::int64_t> convolve(const std::vector<std::int64_t>& x, const Taps& h) {
  std::vector<std::int64_t> y(x.size(), 0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (int k = 0; k < kTaps && static_cast<std::size_t>(k) <= n; ++k) y[n] += h[k] * x[n - k];
  }
  return y;
}

/// Stage s owns taps [4s, 4s+4) and keeps its own copy of the input history.
struct StageState {
  std::array<std::int64_t, kTaps> history{};  // history[k] = x[n - k]
  void shift_in(std::int64_t x) {
    for (int k = kTaps - 1; k > 0; --k) history[k] = history[k - 1];
    history[0] = x;
  }
  std::int64_t partial(const Taps& h, int stage) const {
    std::int64_t acc = 0;
    for (int j = 0; j < kTapsPerStage; ++j) acc += h[stage * kTapsPerStage + j] * history[stage * kTapsPerStage + j];
    return acc;
  }
};

sim::Task<void> fir_stage(Run& run, int stage, Port* in, Port* out, const std::vector<std::int64_t>& x,
                          const Taps& h, std::vector<std::int64_t>& y) {
  StageState st;
  for (std::size_t n = 0; n < x.size(); ++n) {
    std::int64_t sample = 0, acc = 0;
    if (in) {
      const Payload p = co_await run.recv(*in);
      sample = static_cast<std::int64_t>(Run::word(p, 0));
      acc = static_cast<std::int64_t>(Run::word(p, 1));
    } else {
      sample = x[n];
    }
    st.shift_in(sample);
    acc += st.partial(h, stage);
    co_await run.compute(static_cast<CoreId>(stage));
    if (out) {
      co_await run.send(*out, run.pack({static_cast<std::uint64_t>(sample), static_cast<std::uint64_t>(acc)}));
    } else {
      y.push_back(acc);
    }
  }
}

}  // namespace

BenchResult run_fir(const WorkloadSpec& spec) {
  Run run(spec, kStages);
  run.plan_consumers(kStages - 1);
  std::vector<Channel*> links;
  for (int s = 0; s + 1 < kStages; ++s) {
    links.push_back(&run.add("fir_" + std::to_string(s), {static_cast<CoreId>(s)}, {static_cast<CoreId>(s + 1)}));
  }
  const Taps h = make_taps();
  const auto x = make_input(spec.messages, spec.seed);
  std::vector<std::int64_t> y;
  for (int s = 0; s < kStages; ++s) {
    Port* in = s > 0 ? &links[s - 1]->consumer(0) : nullptr;
    Port* out = s + 1 < kStages ? &links[s]->producer(0) : nullptr;
    run.sys.sched.spawn(fir_stage(run, s, in, out, x, h, y));
  }
  Digest d;
  auto r = run.finish(d);
  check(y == convolve(x, h), "fir: output differs from direct convolution");
  for (auto v : y) d.add(static_cast<std::uint64_t>(v));
  r.checksum = d.h;
  return r;
}

}  // namespace vl::workloads::detail
