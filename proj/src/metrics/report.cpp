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

#include "vl/metrics/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace vl::metrics {

namespace {

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", kFloatDigits, v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::optional<double> ratio(double num, double den) {
  if (den == 0) return std::nullopt;
  return fixed(num / den);
}

// Names and values never contain commas, but quote defensively.
std::string cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::optional<double> opt_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string join(const std::vector<std::string>& cols) {
  std::string s;
  for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + cell(cols[i]);
  return s + "\n";
}

}  // namespace

double fixed(double v) {
  const double scale = std::pow(10.0, kFloatDigits);
  return std::round(v * scale) / scale;
}

ComparisonReport build_report(const std::vector<workloads::BenchResult>& results) {
  using Key = std::tuple<std::string, std::uint32_t>;
  std::map<Key, const workloads::BenchResult*> base;
  for (const auto& r : results) {
    if (r.backend == workloads::Backend::Cas) base.emplace(Key{r.name, r.threads}, &r);
  }
  ComparisonReport rep;
  for (const auto& r : results) {
    ReportRow row;
    row.workload = r.name;
    row.backend = workloads::to_string(r.backend);
    row.threads = r.threads;
    row.messages = r.messages;
    row.wall_cycles = r.wall_cycles;
    row.snoops = r.stats.snoops;
    row.mem_transactions = r.stats.mem_transactions;
    row.invalidations = r.stats.invalidations;
    row.upgrades = r.stats.upgrades_s_to_e;
    row.shared_invalidations = r.shared_line_invalidations;
    row.shared_upgrades = r.shared_line_upgrades;
    row.checksum = hex16(r.checksum);
    if (auto it = base.find(Key{r.name, r.threads}); it != base.end()) {
      const auto& b = *it->second;
      row.speedup = ratio(static_cast<double>(b.wall_cycles), static_cast<double>(r.wall_cycles));
      row.snoops_norm = ratio(static_cast<double>(r.stats.snoops), static_cast<double>(b.stats.snoops));
      row.mem_norm = ratio(static_cast<double>(r.stats.mem_transactions), static_cast<double>(b.stats.mem_transactions));
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

const ReportRow* find_row(const ComparisonReport& r, const std::string& workload, const std::string& backend,
                          std::uint32_t threads) {
  for (const auto& row : r.rows) {
    if (row.workload == workload && row.backend == backend && (threads == 0 || row.threads == threads)) return &row;
  }
  return nullptr;
}

void append_scaling(SweepTable& t, const std::string& experiment, const std::vector<workloads::BenchResult>& rows,
                    double clock_ghz) {
  const double first = rows.empty() ? 0.0 : static_cast<double>(rows.front().wall_cycles);
  for (const auto& r : rows) {
    SweepRow s;
    s.experiment = experiment;
    s.variant = workloads::to_string(r.backend);
    s.count = r.threads;
    s.wall_cycles = r.wall_cycles;
    const auto it = r.extra.find("cycles_per_push");
    const double per_op = it != r.extra.end()      ? it->second
                          : r.messages != 0        ? static_cast<double>(r.wall_cycles) / static_cast<double>(r.messages)
                                                   : 0.0;
    s.cycles_per_op = fixed(per_op);
    s.ns_per_op = fixed(per_op / clock_ghz);
    s.speedup = r.wall_cycles ? fixed(first / static_cast<double>(r.wall_cycles)) : 0.0;
    s.snoops = r.stats.snoops;
    s.invalidations = r.stats.invalidations;
    s.upgrades = r.stats.upgrades_s_to_e;
    s.mem_transactions = r.stats.mem_transactions;
    t.rows.push_back(std::move(s));
  }
}

void append_lockhammer(SweepTable& t, const std::string& experiment, baselines::LockKind kind,
                       const std::vector<baselines::LockhammerRow>& rows) {
  const double first = rows.empty() ? 0.0 : rows.front().cycles_per_lock;
  for (const auto& r : rows) {
    SweepRow s;
    s.experiment = experiment;
    s.variant = baselines::to_string(kind);
    s.count = r.cores;
    s.wall_cycles = r.wall_cycles;
    s.cycles_per_op = fixed(r.cycles_per_lock);
    s.ns_per_op = fixed(r.ns_per_lock);
    s.speedup = r.cycles_per_lock > 0 ? fixed(first / r.cycles_per_lock) : 0.0;
    s.snoops = r.stats.snoops;
    s.invalidations = r.stats.invalidations;
    s.upgrades = r.stats.upgrades_s_to_e;
    s.mem_transactions = r.stats.mem_transactions;
    t.rows.push_back(std::move(s));
  }
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> c = {
      "workload", "backend",  "threads",          "messages",      "wall_cycles",          "speedup",
      "snoops",   "snoops_norm", "mem_transactions", "mem_norm",   "invalidations",        "upgrades",
      "shared_invalidations", "shared_upgrades", "checksum"};
  return c;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> c = {"experiment", "variant",    "count",  "wall_cycles",
                                             "cycles_per_op", "ns_per_op", "speedup", "snoops",
                                             "invalidations", "upgrades", "mem_transactions"};
  return c;
}

std::string to_csv(const ComparisonReport& r) {
  std::string out = join(report_columns());
  for (const auto& x : r.rows) {
    out += join({x.workload, x.backend, std::to_string(x.threads), std::to_string(x.messages),
                 std::to_string(x.wall_cycles), fmt(x.speedup), std::to_string(x.snoops), fmt(x.snoops_norm),
                 std::to_string(x.mem_transactions), fmt(x.mem_norm), std::to_string(x.invalidations),
                 std::to_string(x.upgrades), std::to_string(x.shared_invalidations),
                 std::to_string(x.shared_upgrades), x.checksum});
  }
  return out;
}

std::string to_csv(const SweepTable& t) {
  std::string out = join(sweep_columns());
  for (const auto& x : t.rows) {
    out += join({x.experiment, x.variant, std::to_string(x.count), std::to_string(x.wall_cycles),
                 fmt(x.cycles_per_op), fmt(x.ns_per_op), fmt(x.speedup), std::to_string(x.snoops),
                 std::to_string(x.invalidations), std::to_string(x.upgrades), std::to_string(x.mem_transactions)});
  }
  return out;
}

nlohmann::json to_json(const ComparisonReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& x : r.rows) {
    rows.push_back({{"workload", x.workload},
                    {"backend", x.backend},
                    {"threads", x.threads},
                    {"messages", x.messages},
                    {"wall_cycles", x.wall_cycles},
                    {"speedup", opt(x.speedup)},
                    {"snoops", x.snoops},
                    {"snoops_norm", opt(x.snoops_norm)},
                    {"mem_transactions", x.mem_transactions},
                    {"mem_norm", opt(x.mem_norm)},
                    {"invalidations", x.invalidations},
                    {"upgrades", x.upgrades},
                    {"shared_invalidations", x.shared_invalidations},
                    {"shared_upgrades", x.shared_upgrades},
                    {"checksum", x.checksum}});
  }
  return {{"baseline", "cas"}, {"rows", rows}};
}

nlohmann::json to_json(const SweepTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& x : t.rows) {
    rows.push_back({{"experiment", x.experiment},
                    {"variant", x.variant},
                    {"count", x.count},
                    {"wall_cycles", x.wall_cycles},
                    {"cycles_per_op", x.cycles_per_op},
                    {"ns_per_op", x.ns_per_op},
                    {"speedup", x.speedup},
                    {"snoops", x.snoops},
                    {"invalidations", x.invalidations},
                    {"upgrades", x.upgrades},
                    {"mem_transactions", x.mem_transactions}});
  }
  return {{"rows", rows}};
}

ComparisonReport report_from_json(const nlohmann::json& j) {
  ComparisonReport r;
  try {
    for (const auto& x : j.at("rows")) {
      ReportRow row;
      row.workload = x.at("workload").get<std::string>();
      row.backend = x.at("backend").get<std::string>();
      row.threads = x.at("threads").get<std::uint32_t>();
      row.messages = x.at("messages").get<std::uint64_t>();
      row.wall_cycles = x.at("wall_cycles").get<std::uint64_t>();
      row.speedup = opt_from(x.at("speedup"));
      row.snoops = x.at("snoops").get<std::uint64_t>();
      row.snoops_norm = opt_from(x.at("snoops_norm"));
      row.mem_transactions = x.at("mem_transactions").get<std::uint64_t>();
      row.mem_norm = opt_from(x.at("mem_norm"));
      row.invalidations = x.at("invalidations").get<std::uint64_t>();
      row.upgrades = x.at("upgrades").get<std::uint64_t>();
      row.shared_invalidations = x.at("shared_invalidations").get<std::uint64_t>();
      row.shared_upgrades = x.at("shared_upgrades").get<std::uint64_t>();
      row.checksum = x.at("checksum").get<std::string>();
      r.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ExportError(std::string("malformed report: ") + e.what());
  }
  return r;
}

SweepTable sweep_from_json(const nlohmann::json& j) {
  SweepTable t;
  try {
    for (const auto& x : j.at("rows")) {
      SweepRow s;
      s.experiment = x.at("experiment").get<std::string>();
      s.variant = x.at("variant").get<std::string>();
      s.count = x.at("count").get<std::uint32_t>();
      s.wall_cycles = x.at("wall_cycles").get<std::uint64_t>();
      s.cycles_per_op = x.at("cycles_per_op").get<double>();
      s.ns_per_op = x.at("ns_per_op").get<double>();
      s.speedup = x.at("speedup").get<double>();
      s.snoops = x.at("snoops").get<std::uint64_t>();
      s.invalidations = x.at("invalidations").get<std::uint64_t>();
      s.upgrades = x.at("upgrades").get<std::uint64_t>();
      s.mem_transactions = x.at("mem_transactions").get<std::uint64_t>();
      t.rows.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ExportError(std::string("malformed sweep table: ") + e.what());
  }
  return t;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ExportError(path.string() + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw ExportError(path.string() + ": write failed");
}

}  // namespace vl::metrics
