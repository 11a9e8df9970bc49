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

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>

#include "vl/sim/scheduler.hpp"

namespace vl {

using sim::Cycle;
using Addr = std::uint64_t;
using CoreId = std::uint32_t;

inline constexpr std::size_t kLineBytes = 64;
inline constexpr std::size_t kWordBytes = 8;
inline constexpr std::size_t kWordsPerLine = kLineBytes / kWordBytes;
inline constexpr unsigned kMaxCores = 64;

/// One coherence granule.
using Line = std::array<std::uint8_t, kLineBytes>;

constexpr bool is_line_aligned(Addr a) noexcept { return (a & (kLineBytes - 1)) == 0; }
constexpr Addr line_of(Addr a) noexcept { return a & ~Addr{kLineBytes - 1}; }

inline std::uint64_t load_word(const Line& line, std::size_t word) {
  std::uint64_t v;
  std::memcpy(&v, line.data() + word * kWordBytes, kWordBytes);
  return v;
}

inline void store_word(Line& line, std::size_t word, std::uint64_t v) {
  std::memcpy(line.data() + word * kWordBytes, &v, kWordBytes);
}

inline bool is_zero(const Line& line) {
  for (auto b : line)
    if (b != 0) return false;
  return true;
}

enum class MesiState : std::uint8_t { Invalid, Shared, Exclusive, Modified };

constexpr std::string_view to_string(MesiState s) noexcept {
  switch (s) {
    case MesiState::Invalid: return "I";
    case MesiState::Shared: return "S";
    case MesiState::Exclusive: return "E";
    case MesiState::Modified: return "M";
  }
  return "?";
}

}  // namespace vl
