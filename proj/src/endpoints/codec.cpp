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

#include "vl/endpoints/codec.hpp"

#include <algorithm>

namespace vl::endpoints {

std::uint8_t size_code_for(std::size_t len) noexcept {
  if (len % 8 == 0) return 3;
  if (len % 4 == 0) return 2;
  if (len % 2 == 0) return 1;
  return 0;
}

Line encode_control(std::span<const std::uint8_t> payload) {
  if (payload.empty() || payload.size() > ControlRegion::kMaxPayload) {
    throw CodecError("payload must be 1.." + std::to_string(ControlRegion::kMaxPayload) + " bytes");
  }
  Line line{};
  const std::size_t head = ControlRegion::kMaxPayload - payload.size();
  std::copy(payload.begin(), payload.end(), line.begin() + static_cast<std::ptrdiff_t>(head));
  line[ControlRegion::kControlByte] = static_cast<std::uint8_t>((size_code_for(payload.size()) << 6) | head);
  return line;
}

ControlRegion read_control(const Line& line) noexcept {
  const std::uint8_t c = line[ControlRegion::kControlByte];
  return {static_cast<std::uint8_t>(c >> 6), static_cast<std::uint8_t>(c & 0x3f)};
}

bool is_empty_line(const Line& line) noexcept { return line[ControlRegion::kControlByte] == 0; }

std::optional<std::vector<std::uint8_t>> decode_control(const Line& line) {
  if (is_empty_line(line)) return std::nullopt;
  const ControlRegion c = read_control(line);
  if (c.head_offset >= ControlRegion::kMaxPayload) return std::nullopt;
  const std::size_t len = ControlRegion::kMaxPayload - c.head_offset;
  if (size_code_for(len) != c.size_code) return std::nullopt;
  return std::vector<std::uint8_t>(line.begin() + c.head_offset, line.begin() + ControlRegion::kMaxPayload);
}

}  // namespace vl::endpoints
