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

#include "vl/fabric/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace vl::fabric {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view v, const std::string& where) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(where, "invalid number '" + std::string(v) + "'");
  }
  return out;
}

double parse_double(std::string_view v, const std::string& where) {
  try {
    std::size_t used = 0;
    const std::string s(v);
    const double d = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(where, "invalid number '" + std::string(v) + "'");
  }
}

void assign(SimConfig& c, std::string_view key, std::string_view value, const std::string& where) {
  if (key == "num_cores") c.num_cores = parse_number<std::uint32_t>(value, where);
  else if (key == "l1_lines") c.l1_lines = parse_number<std::uint32_t>(value, where);
  else if (key == "l1_assoc") c.l1_assoc = parse_number<std::uint32_t>(value, where);
  else if (key == "l2_lines") c.l2_lines = parse_number<std::uint32_t>(value, where);
  else if (key == "lat_l1") c.lat_l1 = parse_number<Cycle>(value, where);
  else if (key == "lat_l2") c.lat_l2 = parse_number<Cycle>(value, where);
  else if (key == "lat_mem") c.lat_mem = parse_number<Cycle>(value, where);
  else if (key == "lat_c2c") c.lat_c2c = parse_number<Cycle>(value, where);
  else if (key == "lat_vlrd_roundtrip") c.lat_vlrd_roundtrip = parse_number<Cycle>(value, where);
  else if (key == "clock_ghz") c.clock_ghz = parse_double(value, where);
  else throw ConfigError(where, "unknown key '" + std::string(key) + "'");
}

}  // namespace

void SimConfig::validate(const std::string& where) const {
  if (num_cores == 0 || num_cores > kMaxCores) throw ConfigError(where, "num_cores must be in 1..64");
  if (l1_assoc == 0 || l1_lines == 0 || l1_lines % l1_assoc != 0) {
    throw ConfigError(where, "l1_lines must be a positive multiple of l1_assoc");
  }
  if (l2_lines < l1_lines) throw ConfigError(where, "l2_lines must be >= l1_lines (inclusive L2)");
  if (lat_l1 == 0 || lat_l2 == 0 || lat_mem == 0 || lat_c2c == 0 || lat_vlrd_roundtrip == 0) {
    throw ConfigError(where, "latencies must be > 0");
  }
  if (!(lat_l1 < lat_l2 && lat_l2 < lat_mem)) throw ConfigError(where, "require lat_l1 < lat_l2 < lat_mem");
  if (!(clock_ghz > 0.0)) throw ConfigError(where, "clock_ghz must be > 0");
}

SimConfig parse_sim_config(std::string_view text, const std::string& source) {
  SimConfig c;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where, "expected key = value");
    assign(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
  }
  c.validate(source);
  return c;
}

SimConfig sim_config_from_json(const nlohmann::json& j, const std::string& source) {
  if (!j.is_object()) throw ConfigError(source, "config must be an object");
  SimConfig c;
  for (const auto& [key, value] : j.items()) {
    const std::string where = source + ":" + key;
    std::string text;
    if (value.is_number_integer() || value.is_number_unsigned()) text = std::to_string(value.get<std::int64_t>());
    else if (value.is_number_float()) text = std::to_string(value.get<double>());
    else throw ConfigError(where, "expected a number");
    assign(c, key, text, where);
  }
  c.validate(source);
  return c;
}

nlohmann::json to_json(const SimConfig& c) {
  return nlohmann::json{{"num_cores", c.num_cores},
                        {"l1_lines", c.l1_lines},
                        {"l1_assoc", c.l1_assoc},
                        {"l2_lines", c.l2_lines},
                        {"lat_l1", c.lat_l1},
                        {"lat_l2", c.lat_l2},
                        {"lat_mem", c.lat_mem},
                        {"lat_c2c", c.lat_c2c},
                        {"lat_vlrd_roundtrip", c.lat_vlrd_roundtrip},
                        {"clock_ghz", c.clock_ghz}};
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(path.string() + ":byte " + std::to_string(e.byte), e.what());
    }
    return sim_config_from_json(j, path.string());
  }
  return parse_sim_config(text, path.string());
}

}  // namespace vl::fabric
