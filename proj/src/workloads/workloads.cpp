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

#include <functional>

#include "common.hpp"

namespace vl::workloads {

namespace {

using Runner = BenchResult (*)(const WorkloadSpec&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> m = {
      {"ping_pong", detail::run_ping_pong}, {"halo", detail::run_halo},
      {"sweep", detail::run_sweep},         {"incast", detail::run_incast},
      {"fir", detail::run_fir},             {"bitonic", detail::run_bitonic},
      {"producer_scaling", detail::run_producer_scaling},
  };
  return m;
}

}  // namespace

const std::vector<std::string>& workload_names() {
  static const std::vector<std::string> names = {"ping_pong", "halo",    "sweep",           "incast",
                                                 "fir",       "bitonic", "producer_scaling"};
  return names;
}

BenchResult run_workload(const WorkloadSpec& spec) {
  auto it = runners().find(spec.name);
  if (it == runners().end()) throw WorkloadError("unknown workload '" + spec.name + "'");
  spec.sim.validate("sim");
  return it->second(spec);
}

std::vector<BenchResult> run_scaling(const WorkloadSpec& base, const std::vector<std::uint32_t>& thread_counts) {
  std::vector<BenchResult> out;
  for (std::uint32_t n : thread_counts) {
    WorkloadSpec s = base;
    s.threads = n;
    out.push_back(run_workload(s));
  }
  return out;
}

}  // namespace vl::workloads
