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

#include <filesystem>
#include <string>
#include <vector>

#include "vl/metrics/manifest.hpp"
#include "vl/metrics/report.hpp"

namespace vl::metrics {

/// Environment variable that, when set, replaces the manifest's output_dir.
inline constexpr const char* kOutputDirEnv = "VLSIM_OUTPUT_DIR";

std::filesystem::path resolve_output_dir(const RunManifest& m);

/// Every workload under every backend, in manifest order.
std::vector<workloads::BenchResult> run_comparisons(const RunManifest& m);
SweepTable run_sweeps(const RunManifest& m);

/// Writes report.csv, report.json and manifest.json (plus traces when
/// emit_trace is set). Returns the files written, in order.
std::vector<std::filesystem::path> execute_run(const RunManifest& m, const std::filesystem::path& out);
/// Writes sweep.csv, sweep.json and manifest.json.
std::vector<std::filesystem::path> execute_sweep(const RunManifest& m, const std::filesystem::path& out);

/// Names accepted by scenario_trace: "reference" plus every workload name.
std::vector<std::string> trace_scenarios();
/// "reference" is the routing-device reference scenario; a workload name gives
/// the fabric event log of that workload on `backend`.
std::string scenario_trace(const std::string& name, workloads::Backend backend = workloads::Backend::Vl,
                           std::uint32_t messages = 16);

}  // namespace vl::metrics
