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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vl/baselines/lockhammer.hpp"
#include "vl/fabric/config.hpp"
#include "vl/workloads/workloads.hpp"

namespace vl::metrics {

enum class SweepKind { Scaling, Lockhammer };

struct SweepSpec {
  SweepKind kind = SweepKind::Scaling;
  std::string label;
  workloads::WorkloadSpec workload;             // scaling
  std::vector<workloads::Backend> backends;     // scaling
  std::vector<baselines::LockKind> locks;       // lockhammer
  baselines::LockhammerOptions lockhammer;
  std::vector<std::uint32_t> counts;            // threads or cores
};

/// Everything needed to reproduce one invocation.
struct RunManifest {
  std::string name = "run";
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "vlsim_out";
  bool emit_trace = false;
  std::optional<std::filesystem::path> config;  // sim config file, relative to the manifest
  fabric::SimConfig sim;
  vlrd::VlrdConfig device;
  std::vector<workloads::WorkloadSpec> workloads;
  std::vector<workloads::Backend> backends = {workloads::Backend::Vl, workloads::Backend::Cas};
  std::vector<SweepSpec> sweeps;
};

/// Parses and validates; errors are fabric::ConfigError with a JSON pointer
/// (or byte offset) as location. `base_dir` resolves the config path.
RunManifest parse_manifest(const std::string& text, const std::string& source = "<manifest>",
                           const std::filesystem::path& base_dir = ".");
RunManifest load_manifest(const std::filesystem::path& path);

/// Canonical form; omits the output directory so copies written to
/// different places are identical.
nlohmann::json to_json(const RunManifest& m);

}  // namespace vl::metrics
