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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vl/endpoints/codec.hpp"

namespace vl::endpoints {

class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OpenMode { Read, Write, ReadWrite };
enum class Prot { Read, Write };
enum class Role { Producer, Consumer };

/// Name-to-SQI table plus the per-SQI endpoint slot bit-vectors. Producer
/// mappings use pages [0, 16) and consumer mappings use pages [16, 32).
class SqiRegistry {
 public:
  static constexpr std::uint32_t kPagesPerSqi = 32;
  static constexpr std::uint32_t kPagesPerRole = kPagesPerSqi / 2;
  static constexpr std::uint32_t kSlotsPerPage = 64;

  explicit SqiRegistry(std::uint32_t num_sqi);

  std::uint32_t open(const std::string& name, OpenMode mode);
  /// Drops one handle; the SQI and its slots are released on the last close.
  void close(const std::string& name);

  /// Claims the lowest free endpoint slot of the role implied by `prot`.
  DeviceAddress map(std::uint32_t sqi, Prot prot);
  void unmap(const DeviceAddress& addr);

  std::optional<std::uint32_t> lookup(const std::string& name) const;
  bool is_mapped(const DeviceAddress& addr) const;
  std::uint32_t handles(std::uint32_t sqi) const;
  std::uint32_t num_sqi() const noexcept { return static_cast<std::uint32_t>(sqis_.size()); }

  std::string dump() const;

 private:
  struct SqiState {
    std::string name;
    OpenMode mode = OpenMode::ReadWrite;
    std::uint32_t handles = 0;
    std::array<std::uint64_t, kPagesPerSqi> pages{};
  };

  SqiState& live(std::uint32_t sqi);
  const SqiState& live(std::uint32_t sqi) const;

  std::vector<SqiState> sqis_;
  std::map<std::string, std::uint32_t> names_;
};

Role role_for(Prot prot) noexcept;

}  // namespace vl::endpoints
