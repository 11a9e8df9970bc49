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
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vl/baselines/lockhammer.hpp"
#include "vl/workloads/workloads.hpp"

namespace vl::metrics {

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decimal places used for every floating-point column.
inline constexpr int kFloatDigits = 6;

/// Rounds to kFloatDigits so CSV and JSON carry the same value.
double fixed(double v);

/// One (workload, backend, threads) point. Normalized columns are relative
/// to the CAS-backend row of the same workload and thread count.
struct ReportRow {
  std::string workload;
  std::string backend;
  std::uint32_t threads = 0;
  std::uint64_t messages = 0;
  std::uint64_t wall_cycles = 0;
  std::optional<double> speedup;  // baseline wall / this wall
  std::uint64_t snoops = 0;
  std::optional<double> snoops_norm;
  std::uint64_t mem_transactions = 0;
  std::optional<double> mem_norm;
  std::uint64_t invalidations = 0;
  std::uint64_t upgrades = 0;
  std::uint64_t shared_invalidations = 0;
  std::uint64_t shared_upgrades = 0;
  std::string checksum;  // 16 hex digits

  bool operator==(const ReportRow&) const = default;
};

struct ComparisonReport {
  std::vector<ReportRow> rows;
  bool operator==(const ComparisonReport&) const = default;
};

ComparisonReport build_report(const std::vector<workloads::BenchResult>& results);
/// Row for (workload, backend, threads), or nullptr.
const ReportRow* find_row(const ComparisonReport& r, const std::string& workload, const std::string& backend,
                          std::uint32_t threads = 0);

/// One point of a scaling or lock sweep.
struct SweepRow {
  std::string experiment;
  std::string variant;  // backend or lock kind
  std::uint32_t count = 0;  // threads or cores
  std::uint64_t wall_cycles = 0;
  double cycles_per_op = 0;
  double ns_per_op = 0;
  double speedup = 0;  // first row of the same experiment and variant / this row
  std::uint64_t snoops = 0;
  std::uint64_t invalidations = 0;
  std::uint64_t upgrades = 0;
  std::uint64_t mem_transactions = 0;

  bool operator==(const SweepRow&) const = default;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  bool operator==(const SweepTable&) const = default;
};

void append_scaling(SweepTable& t, const std::string& experiment, const std::vector<workloads::BenchResult>& rows,
                    double clock_ghz);
void append_lockhammer(SweepTable& t, const std::string& experiment, baselines::LockKind kind,
                       const std::vector<baselines::LockhammerRow>& rows);

const std::vector<std::string>& report_columns();
const std::vector<std::string>& sweep_columns();

std::string to_csv(const ComparisonReport& r);
std::string to_csv(const SweepTable& t);
nlohmann::json to_json(const ComparisonReport& r);
nlohmann::json to_json(const SweepTable& t);
ComparisonReport report_from_json(const nlohmann::json& j);
SweepTable sweep_from_json(const nlohmann::json& j);

/// Writes `text` to `path`, creating parent directories. Throws ExportError.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace vl::metrics
