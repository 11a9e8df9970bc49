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

#include "vl/metrics/driver.hpp"

#include <cstdlib>
#include <sstream>

#include "vl/vlrd/vlrd.hpp"

namespace vl::metrics {

std::filesystem::path resolve_output_dir(const RunManifest& m) {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return m.output_dir;
}

std::vector<workloads::BenchResult> run_comparisons(const RunManifest& m) {
  std::vector<workloads::BenchResult> out;
  for (const auto& spec : m.workloads) {
    for (auto b : m.backends) {
      auto s = spec;
      s.backend = b;
      out.push_back(workloads::run_workload(s));
    }
  }
  return out;
}

SweepTable run_sweeps(const RunManifest& m) {
  SweepTable t;
  for (const auto& sw : m.sweeps) {
    if (sw.kind == SweepKind::Scaling) {
      for (auto b : sw.backends) {
        auto s = sw.workload;
        s.backend = b;
        append_scaling(t, sw.label, workloads::run_scaling(s, sw.counts), m.sim.clock_ghz);
      }
    } else {
      for (auto k : sw.locks) {
        append_lockhammer(t, sw.label, k, baselines::lockhammer_sweep(m.sim, k, sw.counts, sw.lockhammer));
      }
    }
  }
  return t;
}

namespace {

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::vector<std::filesystem::path> write_common(const RunManifest& m, const std::filesystem::path& out) {
  const auto p = out / "manifest.json";
  write_file(p, dump(to_json(m)));
  return {p};
}

}  // namespace

std::vector<std::filesystem::path> execute_run(const RunManifest& m, const std::filesystem::path& out) {
  std::vector<std::filesystem::path> files;
  std::vector<workloads::BenchResult> results;
  for (const auto& spec : m.workloads) {
    for (auto b : m.backends) {
      auto s = spec;
      s.backend = b;
      std::ostringstream trace;
      if (m.emit_trace) s.trace = &trace;
      results.push_back(workloads::run_workload(s));
      if (m.emit_trace) {
        files.push_back(out / ("trace_" + s.name + "_" + std::string(workloads::to_string(b)) + ".txt"));
        write_file(files.back(), trace.str());
      }
    }
  }
  if (m.emit_trace) {
    files.push_back(out / "trace_reference.txt");
    write_file(files.back(), vlrd::reference_scenario_trace());
  }
  const auto report = build_report(results);
  files.push_back(out / "report.csv");
  write_file(files.back(), to_csv(report));
  files.push_back(out / "report.json");
  write_file(files.back(), dump(to_json(report)));
  for (auto& p : write_common(m, out)) files.push_back(p);
  return files;
}

std::vector<std::filesystem::path> execute_sweep(const RunManifest& m, const std::filesystem::path& out) {
  const auto table = run_sweeps(m);
  std::vector<std::filesystem::path> files{out / "sweep.csv", out / "sweep.json"};
  write_file(files[0], to_csv(table));
  write_file(files[1], dump(to_json(table)));
  for (auto& p : write_common(m, out)) files.push_back(p);
  return files;
}

std::vector<std::string> trace_scenarios() {
  std::vector<std::string> s{"reference"};
  for (const auto& n : workloads::workload_names()) s.push_back(n);
  return s;
}

std::string scenario_trace(const std::string& name, workloads::Backend backend, std::uint32_t messages) {
  if (name == "reference") return vlrd::reference_scenario_trace();
  workloads::WorkloadSpec s;
  s.name = name;
  s.backend = backend;
  s.messages = messages;
  s.elements = 16;
  std::ostringstream trace;
  s.trace = &trace;
  workloads::run_workload(s);
  return trace.str();
}

}  // namespace vl::metrics
