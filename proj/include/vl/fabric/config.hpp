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
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "vl/fabric/types.hpp"

namespace vl::fabric {

/// Configuration error carrying the source location it was found at.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// Machine description. Defaults model a 16-core 2 GHz part with 32 KiB
/// 2-way private L1s and a 1 MiB shared L2; lat_c2c is calibrated so one
/// unsynchronized line transfer costs 28 ns.
struct SimConfig {
  std::uint32_t num_cores = 16;
  std::uint32_t l1_lines = 512;
  std::uint32_t l1_assoc = 2;
  std::uint32_t l2_lines = 16384;
  Cycle lat_l1 = 2;
  Cycle lat_l2 = 20;
  Cycle lat_mem = 200;
  Cycle lat_c2c = 56;
  Cycle lat_vlrd_roundtrip = 14;
  double clock_ghz = 2.0;

  /// Throws ConfigError when an invariant does not hold.
  void validate(const std::string& where = "SimConfig") const;

  std::uint32_t l1_sets() const noexcept { return l1_lines / l1_assoc; }
  Cycle vlrd_one_way() const noexcept { return (lat_vlrd_roundtrip + 1) / 2; }
  double to_ns(double cycles) const noexcept { return cycles / clock_ghz; }

  bool operator==(const SimConfig&) const = default;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
SimConfig parse_sim_config(std::string_view text, const std::string& source = "<config>");

/// Loads either a key=value file or, if the file starts with '{', a JSON object.
SimConfig load_sim_config(const std::filesystem::path& path);

SimConfig sim_config_from_json(const nlohmann::json& j, const std::string& source = "<json>");
nlohmann::json to_json(const SimConfig& c);

}  // namespace vl::fabric
