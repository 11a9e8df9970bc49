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

#include "vl/metrics/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace vl::metrics {

namespace {

using fabric::ConfigError;
using nlohmann::json;

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.contains(k)) throw ConfigError(at(where, k), "unknown key");
  }
}

std::uint64_t get_uint(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ConfigError(where, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::uint32_t get_u32(const json& j, const std::string& where) {
  const auto v = get_uint(j, where);
  if (v > 0xffffffffull) throw ConfigError(where, "value too large");
  return static_cast<std::uint32_t>(v);
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) throw ConfigError(where, "expected true or false");
  return j.get<bool>();
}

const json& get_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where, "expected an array");
  return j;
}

std::vector<std::uint32_t> get_counts(const json& j, const std::string& where) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < get_array(j, where).size(); ++i) out.push_back(get_u32(j[i], at(where, i)));
  if (out.empty()) throw ConfigError(where, "needs at least one count");
  return out;
}

workloads::Backend get_backend(const json& j, const std::string& where) {
  try {
    return workloads::parse_backend(get_string(j, where));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where, e.what());
  }
}

std::vector<workloads::Backend> get_backends(const json& j, const std::string& where) {
  std::vector<workloads::Backend> out;
  for (std::size_t i = 0; i < get_array(j, where).size(); ++i) out.push_back(get_backend(j[i], at(where, i)));
  return out;
}

#define VLSIM_SPEC_FIELDS(X) \
  X(threads)                 \
  X(messages)                \
  X(payload_bytes)           \
  X(compute_cycles)          \
  X(poll_backoff)            \
  X(send_backoff)            \
  X(elements)                \
  X(ring_lines)              \
  X(queue_capacity)          \
  X(seed)                    \
  X(deadline)

/// Applies the spec fields present in `j` on top of `s`.
void apply_spec(workloads::WorkloadSpec& s, const json& j, const std::string& where, bool allow_name) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  for (const auto& [k, v] : j.items()) {
    const std::string w = at(where, k);
    if (k == "name" && allow_name) {
      s.name = get_string(v, w);
      continue;
    }
    if (k == "backend" && allow_name) {
      s.backend = get_backend(v, w);
      continue;
    }
#define X(f)                                                          \
  if (k == #f) {                                                     \
    s.f = static_cast<decltype(s.f)>(get_uint(v, w));                \
    continue;                                                        \
  }
    VLSIM_SPEC_FIELDS(X)
#undef X
    throw ConfigError(w, "unknown key");
  }
}

json spec_json(const workloads::WorkloadSpec& s) {
  json j{{"name", s.name}};
#define X(f) j[#f] = s.f;
  VLSIM_SPEC_FIELDS(X)
#undef X
  return j;
}

workloads::WorkloadSpec workload_entry(const json& j, const workloads::WorkloadSpec& defaults,
                                       const std::string& where) {
  workloads::WorkloadSpec s = defaults;
  if (j.is_string()) {
    s.name = j.get<std::string>();
  } else {
    if (!j.is_object() || !j.contains("name")) throw ConfigError(where, "expected a name or an object with \"name\"");
    apply_spec(s, j, where, true);
  }
  const auto& names = workloads::workload_names();
  if (std::find(names.begin(), names.end(), s.name) == names.end()) {
    throw ConfigError(where, "unknown workload '" + s.name + "'");
  }
  return s;
}

vlrd::VlrdConfig device_config(const json& j, const std::string& where) {
  only_keys(j, where, {"num_sqi", "buf_entries", "sqi_prod_quota"});
  vlrd::VlrdConfig d;
  if (j.contains("num_sqi")) d.num_sqi = get_u32(j["num_sqi"], at(where, "num_sqi"));
  if (j.contains("buf_entries")) d.buf_entries = get_u32(j["buf_entries"], at(where, "buf_entries"));
  if (j.contains("sqi_prod_quota")) d.sqi_prod_quota = get_u32(j["sqi_prod_quota"], at(where, "sqi_prod_quota"));
  if (d.num_sqi == 0 || d.num_sqi > vlrd::kLinkTabRows) throw ConfigError(at(where, "num_sqi"), "out of range");
  if (d.buf_entries == 0 || d.buf_entries > vlrd::kMaxEntries) {
    throw ConfigError(at(where, "buf_entries"), "out of range");
  }
  return d;
}

SweepSpec sweep_entry(const json& j, const workloads::WorkloadSpec& defaults, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  if (!j.contains("kind")) throw ConfigError(where, "missing \"kind\"");
  const std::string kind = get_string(j["kind"], at(where, "kind"));
  SweepSpec s;
  s.label = j.contains("label") ? get_string(j["label"], at(where, "label")) : std::string();
  if (kind == "scaling") {
    only_keys(j, where, {"kind", "label", "workload", "backends", "threads"});
    s.kind = SweepKind::Scaling;
    if (!j.contains("workload")) throw ConfigError(where, "missing \"workload\"");
    s.workload = workload_entry(j["workload"], defaults, at(where, "workload"));
    s.backends = j.contains("backends") ? get_backends(j["backends"], at(where, "backends"))
                                        : std::vector<workloads::Backend>{workloads::Backend::Vl};
    if (!j.contains("threads")) throw ConfigError(where, "missing \"threads\"");
    s.counts = get_counts(j["threads"], at(where, "threads"));
    if (s.label.empty()) s.label = s.workload.name + "_scaling";
  } else if (kind == "lockhammer") {
    only_keys(j, where, {"kind", "label", "locks", "cores", "iterations", "critical_cycles", "post_release_cycles"});
    s.kind = SweepKind::Lockhammer;
    if (j.contains("locks")) {
      const auto w = at(where, "locks");
      for (std::size_t i = 0; i < get_array(j["locks"], w).size(); ++i) {
        try {
          s.locks.push_back(baselines::parse_lock_kind(get_string(j["locks"][i], at(w, i))));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(at(w, i), e.what());
        }
      }
    } else {
      s.locks = {baselines::LockKind::Cas, baselines::LockKind::Ticket, baselines::LockKind::Spin};
    }
    if (!j.contains("cores")) throw ConfigError(where, "missing \"cores\"");
    s.counts = get_counts(j["cores"], at(where, "cores"));
    if (j.contains("iterations")) s.lockhammer.iterations = get_u32(j["iterations"], at(where, "iterations"));
    if (j.contains("critical_cycles")) {
      s.lockhammer.critical_cycles = get_uint(j["critical_cycles"], at(where, "critical_cycles"));
    }
    if (j.contains("post_release_cycles")) {
      s.lockhammer.post_release_cycles = get_uint(j["post_release_cycles"], at(where, "post_release_cycles"));
    }
    if (s.label.empty()) s.label = "lockhammer";
  } else {
    throw ConfigError(at(where, "kind"), "expected \"scaling\" or \"lockhammer\"");
  }
  return s;
}

}  // namespace

RunManifest parse_manifest(const std::string& text, const std::string& source,
                           const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ":byte " + std::to_string(e.byte), "invalid JSON");
  }
  const std::string root = source + ":";
  only_keys(j, root, {"name", "seed", "output_dir", "emit_trace", "config", "sim", "device", "defaults", "workloads",
                      "backends", "sweeps"});
  RunManifest m;
  if (j.contains("name")) m.name = get_string(j["name"], at(root, "name"));
  if (j.contains("seed")) m.seed = get_uint(j["seed"], at(root, "seed"));
  if (j.contains("output_dir")) m.output_dir = get_string(j["output_dir"], at(root, "output_dir"));
  if (j.contains("emit_trace")) m.emit_trace = get_bool(j["emit_trace"], at(root, "emit_trace"));
  if (j.contains("config") && j.contains("sim")) throw ConfigError(at(root, "sim"), "give either \"config\" or \"sim\"");
  if (j.contains("config")) {
    m.config = get_string(j["config"], at(root, "config"));
    m.sim = fabric::load_sim_config(base_dir / *m.config);
  }
  if (j.contains("sim")) m.sim = fabric::sim_config_from_json(j["sim"], at(root, "sim"));
  if (j.contains("device")) m.device = device_config(j["device"], at(root, "device"));

  workloads::WorkloadSpec defaults;
  defaults.seed = m.seed;
  if (j.contains("defaults")) apply_spec(defaults, j["defaults"], at(root, "defaults"), false);
  defaults.sim = m.sim;
  defaults.device = m.device;

  if (j.contains("backends")) m.backends = get_backends(j["backends"], at(root, "backends"));
  if (j.contains("workloads")) {
    const auto w = at(root, "workloads");
    for (std::size_t i = 0; i < get_array(j["workloads"], w).size(); ++i) {
      m.workloads.push_back(workload_entry(j["workloads"][i], defaults, at(w, i)));
    }
  }
  if (j.contains("sweeps")) {
    const auto w = at(root, "sweeps");
    for (std::size_t i = 0; i < get_array(j["sweeps"], w).size(); ++i) {
      m.sweeps.push_back(sweep_entry(j["sweeps"][i], defaults, at(w, i)));
    }
  }
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.string(), path.parent_path());
}

json to_json(const RunManifest& m) {
  json j{{"name", m.name}, {"seed", m.seed}, {"emit_trace", m.emit_trace}, {"sim", fabric::to_json(m.sim)}};
  j["device"] = {{"num_sqi", m.device.num_sqi},
                 {"buf_entries", m.device.buf_entries},
                 {"sqi_prod_quota", m.device.sqi_prod_quota}};
  j["backends"] = json::array();
  for (auto b : m.backends) j["backends"].push_back(workloads::to_string(b));
  j["workloads"] = json::array();
  for (const auto& s : m.workloads) j["workloads"].push_back(spec_json(s));
  j["sweeps"] = json::array();
  for (const auto& s : m.sweeps) {
    json e{{"label", s.label}};
    if (s.kind == SweepKind::Scaling) {
      e["kind"] = "scaling";
      e["workload"] = spec_json(s.workload);
      e["backends"] = json::array();
      for (auto b : s.backends) e["backends"].push_back(workloads::to_string(b));
      e["threads"] = s.counts;
    } else {
      e["kind"] = "lockhammer";
      e["locks"] = json::array();
      for (auto k : s.locks) e["locks"].push_back(baselines::to_string(k));
      e["cores"] = s.counts;
      e["iterations"] = s.lockhammer.iterations;
      e["critical_cycles"] = s.lockhammer.critical_cycles;
      e["post_release_cycles"] = s.lockhammer.post_release_cycles;
    }
    j["sweeps"].push_back(std::move(e));
  }
  return j;
}

}  // namespace vl::metrics
