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
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "vl/fabric/types.hpp"
#include "vl/vlrd/address.hpp"

namespace vl::endpoints {

using vlrd::AddressError;
using vlrd::AddressLayout;
using vlrd::DeviceAddress;

class CodecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Line layout: byte 63 holds size_code (bits 7:6) and head_offset (bits 5:0),
/// byte 62 is reserved, and the payload occupies [head_offset, 62).
struct ControlRegion {
  static constexpr std::size_t kControlByte = kLineBytes - 1;
  static constexpr std::size_t kReservedByte = kLineBytes - 2;
  static constexpr std::size_t kMaxPayload = kLineBytes - 2;

  std::uint8_t size_code = 0;  // 0 byte, 1 halfword, 2 word, 3 doubleword
  std::uint8_t head_offset = 0;

  bool operator==(const ControlRegion&) const = default;
};

/// Widest access unit (as a size code) that evenly divides `len`.
std::uint8_t size_code_for(std::size_t len) noexcept;

Line encode_control(std::span<const std::uint8_t> payload);
ControlRegion read_control(const Line& line) noexcept;
/// Empty for a line with a zero control byte or an inconsistent header.
std::optional<std::vector<std::uint8_t>> decode_control(const Line& line);
bool is_empty_line(const Line& line) noexcept;

}  // namespace vl::endpoints
