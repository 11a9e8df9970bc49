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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vl/metrics/driver.hpp"

namespace {

using namespace vl;

enum Exit { kOk = 0, kCheckFailed = 1, kConfigError = 2, kIoError = 3 };

int guarded(const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const fabric::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const metrics::ExportError& e) {
    std::cerr << "export error: " << e.what() << "\n";
    return kIoError;
  } catch (const workloads::WorkloadError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
}

void print_files(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << f.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vlsim: cycle-level simulator of a hardware cross-core message queue and software baselines"};
  app.require_subcommand(1);

  std::string manifest_path, out_override;
  auto* run = app.add_subcommand("run", "Run every workload x backend in a manifest and write the comparison report");
  run->add_option("manifest", manifest_path, "JSON manifest")->required();
  run->add_option("-o,--output-dir", out_override, "Output directory (overrides manifest and environment)");

  auto* sweep = app.add_subcommand("sweep", "Run the scaling and lock sweeps of a manifest");
  sweep->add_option("manifest", manifest_path, "JSON manifest")->required();
  sweep->add_option("-o,--output-dir", out_override, "Output directory (overrides manifest and environment)");

  std::string scenario, backend = "vl", trace_out;
  std::uint32_t messages = 16;
  auto* trace = app.add_subcommand("trace", "Print an event trace for a named scenario");
  trace->add_option("scenario", scenario, "reference or a workload name")->required();
  trace->add_option("-b,--backend", backend, "Queue backend for workload traces");
  trace->add_option("-n,--messages", messages, "Messages per channel for workload traces");
  trace->add_option("-o,--out", trace_out, "Write to this file instead of stdout");

  auto* list = app.add_subcommand("list", "List workloads, backends and trace scenarios");

  CLI11_PARSE(app, argc, argv);

  const auto out_dir = [&](const metrics::RunManifest& m) {
    return out_override.empty() ? metrics::resolve_output_dir(m) : std::filesystem::path(out_override);
  };

  if (run->parsed()) {
    return guarded([&] {
      const auto m = metrics::load_manifest(manifest_path);
      print_files(metrics::execute_run(m, out_dir(m)));
    });
  }
  if (sweep->parsed()) {
    return guarded([&] {
      const auto m = metrics::load_manifest(manifest_path);
      print_files(metrics::execute_sweep(m, out_dir(m)));
    });
  }
  if (trace->parsed()) {
    return guarded([&] {
      workloads::Backend b{};
      try {
        b = workloads::parse_backend(backend);
      } catch (const std::invalid_argument& e) {
        throw fabric::ConfigError("--backend", e.what());
      }
      const auto scenarios = metrics::trace_scenarios();
      if (std::find(scenarios.begin(), scenarios.end(), scenario) == scenarios.end()) {
        throw fabric::ConfigError("scenario", "unknown scenario '" + scenario + "'");
      }
      const std::string text = metrics::scenario_trace(scenario, b, messages);
      if (trace_out.empty()) std::cout << text;
      else metrics::write_file(trace_out, text);
    });
  }
  if (list->parsed()) {
    std::cout << "workloads:";
    for (const auto& n : workloads::workload_names()) std::cout << ' ' << n;
    std::cout << "\nbackends: vl cas cas_unbounded lock\nlocks: cas ticket spin\nscenarios:";
    for (const auto& s : metrics::trace_scenarios()) std::cout << ' ' << s;
    std::cout << "\n";
  }
  return kOk;
}
