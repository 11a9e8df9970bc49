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

#include <numeric>

#include "criteria.hpp"
#include "vl/baselines/lockhammer.hpp"
#include "vl/metrics/driver.hpp"

namespace vl::acceptance {
namespace {

using workloads::Backend;
using workloads::BenchResult;

struct Suite {
  std::vector<BenchResult> results;
  metrics::ComparisonReport report;
  double seconds = 0;
};

// Shared by the suite comparison and the coherence-free check.
const Suite& suite() {
  static const Suite s = [] {
    Suite out;
    const auto m = metrics::load_manifest(std::string(VLSIM_SOURCE_DIR) + "/manifests/suite.json");
    const Stopwatch t;
    out.results = metrics::run_comparisons(m);
    out.seconds = t.seconds();
    out.report = metrics::build_report(out.results);
    return out;
  }();
  return s;
}

workloads::WorkloadSpec producer_spec(Backend b, std::uint32_t producers) {
  workloads::WorkloadSpec w;
  w.name = "producer_scaling";
  w.backend = b;
  w.threads = producers + 1;
  w.messages = 200;
  return w;
}

Outcome vl_coherence_free() {
  Checker c;
  std::vector<BenchResult> runs;
  for (const auto& r : suite().results) {
    if (r.backend == Backend::Vl) runs.push_back(r);
  }
  for (std::uint32_t p : {2u, 8u, 15u}) runs.push_back(workloads::run_workload(producer_spec(Backend::Vl, p)));
  for (const auto& r : runs) {
    const std::string who = r.name + "/" + std::to_string(r.threads);
    c.expect(r.shared_line_invalidations == 0, who + ": " + std::to_string(r.shared_line_invalidations) + " invalidations");
    c.expect(r.shared_line_upgrades == 0, who + ": " + std::to_string(r.shared_line_upgrades) + " upgrades");
  }
  c.note(std::to_string(runs.size()) + " VL runs, no invalidation or upgrade on shared lines");
  return c.done();
}

bool non_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1]) return false;
  }
  return true;
}

Outcome cas_trend() {
  Checker c;
  std::vector<double> inv, upg;
  for (std::uint32_t p = 2; p <= 15; ++p) {
    auto r = workloads::run_workload(producer_spec(Backend::Cas, p));
    inv.push_back(r.extra.at("invalidations_per_push"));
    upg.push_back(r.extra.at("upgrades_per_push"));
  }
  c.expect(non_decreasing(inv), "invalidations/push not monotone");
  c.expect(non_decreasing(upg), "upgrades/push not monotone");
  const double gi = inv.back() / inv.front(), gu = upg.back() / upg.front();
  c.expect(gi >= 3.0, "invalidation growth " + num(gi) + "x");
  c.expect(gu >= 3.0, "upgrade growth " + num(gu) + "x");
  c.note("inv/push " + num(inv.front()) + " -> " + num(inv.back()) + " (" + num(gi) + "x), upg/push " +
         num(upg.front()) + " -> " + num(upg.back()) + " (" + num(gu) + "x)");
  return c.done();
}

Outcome lock_contention() {
  Checker c;
  const fabric::SimConfig cfg;
  std::vector<std::uint32_t> cores(14);
  std::iota(cores.begin(), cores.end(), 1u);
  std::string summary;
  for (auto kind : {baselines::LockKind::Cas, baselines::LockKind::Ticket, baselines::LockKind::Spin}) {
    const auto rows = baselines::lockhammer_sweep(cfg, kind, cores);
    const std::string name(baselines::to_string(kind));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      c.expect(rows[i].cycles_per_lock > rows[i - 1].cycles_per_lock,
               name + ": " + std::to_string(rows[i].cores) + " cores not slower than " + std::to_string(rows[i - 1].cores));
    }
    const double growth = rows.back().cycles_per_lock / rows.front().cycles_per_lock;
    c.expect(growth >= 10.0, name + ": 14-core growth " + num(growth) + "x");
    summary += name + " " + num(growth, 1) + "x, ";
  }
  const double ns = cfg.to_ns(baselines::unsynchronized_transfer_cycles(cfg));
  c.expect(ns >= 22.0 && ns <= 34.0, "1:1 transfer " + num(ns) + " ns");
  c.note(summary + "1:1 transfer " + num(ns) + " ns");
  return c.done();
}

Outcome vl_vs_cas() {
  Checker c;
  const auto& s = suite();
  const auto row = [&](const std::string& w) { return metrics::find_row(s.report, w, "vl", 0); };
  std::string summary;
  for (const auto& name : {"ping_pong", "halo", "sweep", "incast", "fir", "bitonic"}) {
    const auto* r = row(name);
    c.expect(r != nullptr && r->speedup && r->snoops_norm && r->mem_norm, std::string(name) + ": missing row");
    if (!r || !r->speedup || !r->snoops_norm || !r->mem_norm) continue;
    c.expect(*r->snoops_norm <= 0.5, std::string(name) + ": snoops " + num(*r->snoops_norm, 3) + "x of baseline");
    summary += std::string(name) + " " + num(*r->speedup) + "x, ";
  }
  if (const auto* r = row("ping_pong"); r && r->speedup) c.expect(*r->speedup >= 2.0, "ping_pong speedup " + num(*r->speedup));
  if (const auto* r = row("incast"); r && r->speedup) c.expect(*r->speedup >= 1.2, "incast speedup " + num(*r->speedup));
  for (const auto& name : {"incast", "fir"}) {
    if (const auto* r = row(name); r && r->mem_norm) {
      c.expect(*r->mem_norm <= 0.5, std::string(name) + ": memory transactions " + num(*r->mem_norm, 3) + "x");
    }
  }
  c.expect(s.seconds < 300.0, "suite took " + num(s.seconds, 1) + " s");
  c.note(summary + "suite " + num(s.seconds, 1) + " s");
  return c.done();
}

}  // namespace

std::vector<Criterion> coherence_criteria() {
  return {
      {"3", "VL runs cause no coherence traffic on shared lines", vl_coherence_free},
      {"4", "CAS ring coherence cost grows with producers", cas_trend},
      {"5", "lock cost grows with contention; 1:1 transfer calibration", lock_contention},
      {"6", "VL against the CAS ring across the suite", vl_vs_cas},
  };
}

}  // namespace vl::acceptance
