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
#include <stdexcept>

#include "vl/fabric/types.hpp"

namespace vl::vlrd {

class AddressError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fields of an endpoint's device-memory physical address.
struct DeviceAddress {
  std::uint32_t vlrd = 0;
  std::uint32_t sqi = 0;
  std::uint32_t page = 0;    // 4 KiB page within the SQI's window
  std::uint32_t offset = 0;  // 64 B endpoint slot within the page
  bool operator==(const DeviceAddress&) const = default;
};

/// Bit layout: [J : N+1] vlrd, [N : 18] sqi, [17 : 12] page, [11 : 6] offset,
/// [5 : 0] zero, all relative to a window base in physical memory.
struct AddressLayout {
  static constexpr unsigned kSqiLow = 18;
  static constexpr unsigned kPageLow = 12;
  static constexpr unsigned kOffsetLow = 6;
  static constexpr std::uint32_t kPages = 64;
  static constexpr std::uint32_t kOffsets = 64;

  Addr base = Addr{1} << 40;
  unsigned n = 25;
  unsigned j = 29;

  std::uint32_t num_sqi() const noexcept { return 1u << (n - kSqiLow + 1); }
  std::uint32_t num_vlrd() const noexcept { return 1u << (j - n); }
  /// Size of the window covered by all fields.
  Addr span_bytes() const noexcept { return Addr{1} << (j + 1); }

  void validate() const {
    if (n < kSqiLow || j <= n || j >= 40) throw AddressError("address layout needs 18 <= N < J < 40");
    if ((base & (span_bytes() - 1)) != 0) throw AddressError("device window base must be span aligned");
  }

  Addr encode(const DeviceAddress& f) const {
    if (f.vlrd >= num_vlrd() || f.sqi >= num_sqi() || f.page >= kPages || f.offset >= kOffsets) {
      throw AddressError("device address field out of range");
    }
    return base | (Addr{f.vlrd} << (n + 1)) | (Addr{f.sqi} << kSqiLow) | (Addr{f.page} << kPageLow) |
           (Addr{f.offset} << kOffsetLow);
  }

  bool contains(Addr a) const noexcept { return a >= base && a - base < span_bytes(); }

  std::optional<DeviceAddress> decode(Addr a) const noexcept {
    if (!contains(a) || (a & (kLineBytes - 1)) != 0) return std::nullopt;
    const Addr r = a - base;
    DeviceAddress f;
    f.vlrd = static_cast<std::uint32_t>(r >> (n + 1));
    f.sqi = static_cast<std::uint32_t>((r >> kSqiLow) & (num_sqi() - 1));
    f.page = static_cast<std::uint32_t>((r >> kPageLow) & (kPages - 1));
    f.offset = static_cast<std::uint32_t>((r >> kOffsetLow) & (kOffsets - 1));
    return f;
  }
};

}  // namespace vl::vlrd
