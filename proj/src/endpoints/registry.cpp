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

#include "vl/endpoints/registry.hpp"

#include <bit>
#include <sstream>

namespace vl::endpoints {

namespace {

bool allows(OpenMode mode, Prot prot) {
  if (mode == OpenMode::ReadWrite) return true;
  return (mode == OpenMode::Write) == (prot == Prot::Write);
}

const char* mode_name(OpenMode m) {
  switch (m) {
    case OpenMode::Read: return "r";
    case OpenMode::Write: return "w";
    case OpenMode::ReadWrite: return "rw";
  }
  return "?";
}

}  // namespace

Role role_for(Prot prot) noexcept { return prot == Prot::Write ? Role::Producer : Role::Consumer; }

SqiRegistry::SqiRegistry(std::uint32_t num_sqi) : sqis_(num_sqi) {
  if (num_sqi == 0) throw RegistryError("registry needs at least one SQI");
}

std::uint32_t SqiRegistry::open(const std::string& name, OpenMode mode) {
  if (name.empty()) throw RegistryError("SQI name must not be empty");
  if (auto it = names_.find(name); it != names_.end()) {
    auto& s = sqis_[it->second];
    if (mode != s.mode) s.mode = OpenMode::ReadWrite;
    ++s.handles;
    return it->second;
  }
  for (std::uint32_t i = 0; i < sqis_.size(); ++i) {
    if (sqis_[i].handles != 0) continue;
    sqis_[i] = SqiState{name, mode, 1, {}};
    names_.emplace(name, i);
    return i;
  }
  throw RegistryError("no free SQI for '" + name + "'");
}

void SqiRegistry::close(const std::string& name) {
  auto it = names_.find(name);
  if (it == names_.end()) throw RegistryError("close of unknown SQI '" + name + "'");
  auto& s = sqis_[it->second];
  if (--s.handles == 0) {
    s = SqiState{};
    names_.erase(it);
  }
}

SqiRegistry::SqiState& SqiRegistry::live(std::uint32_t sqi) {
  return const_cast<SqiState&>(static_cast<const SqiRegistry&>(*this).live(sqi));
}

const SqiRegistry::SqiState& SqiRegistry::live(std::uint32_t sqi) const {
  if (sqi >= sqis_.size() || sqis_[sqi].handles == 0) {
    throw RegistryError("SQI " + std::to_string(sqi) + " is not open");
  }
  return sqis_[sqi];
}

DeviceAddress SqiRegistry::map(std::uint32_t sqi, Prot prot) {
  auto& s = live(sqi);
  if (!allows(s.mode, prot)) throw RegistryError("SQI '" + s.name + "' was not opened for this protection");
  const std::uint32_t first = prot == Prot::Write ? 0 : kPagesPerRole;
  for (std::uint32_t p = first; p < first + kPagesPerRole; ++p) {
    const std::uint64_t free = ~s.pages[p];
    if (free == 0) continue;
    const auto off = static_cast<std::uint32_t>(std::countr_zero(free));
    s.pages[p] |= std::uint64_t{1} << off;
    return DeviceAddress{0, sqi, p, off};
  }
  throw RegistryError("all endpoint slots of SQI '" + s.name + "' are taken");
}

void SqiRegistry::unmap(const DeviceAddress& a) {
  auto& s = live(a.sqi);
  if (a.page >= kPagesPerSqi || a.offset >= kSlotsPerPage || !is_mapped(a)) {
    throw RegistryError("unmap of an endpoint slot that is not mapped");
  }
  s.pages[a.page] &= ~(std::uint64_t{1} << a.offset);
}

std::optional<std::uint32_t> SqiRegistry::lookup(const std::string& name) const {
  auto it = names_.find(name);
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

bool SqiRegistry::is_mapped(const DeviceAddress& a) const {
  if (a.sqi >= sqis_.size() || a.page >= kPagesPerSqi || a.offset >= kSlotsPerPage) return false;
  return (sqis_[a.sqi].pages[a.page] >> a.offset) & 1;
}

std::uint32_t SqiRegistry::handles(std::uint32_t sqi) const { return sqi < sqis_.size() ? sqis_[sqi].handles : 0; }

std::string SqiRegistry::dump() const {
  std::ostringstream os;
  for (std::uint32_t i = 0; i < sqis_.size(); ++i) {
    const auto& s = sqis_[i];
    if (s.handles == 0) continue;
    std::uint32_t prod = 0, cons = 0;
    for (std::uint32_t p = 0; p < kPagesPerSqi; ++p) {
      (p < kPagesPerRole ? prod : cons) += static_cast<std::uint32_t>(std::popcount(s.pages[p]));
    }
    os << "sqi " << i << " '" << s.name << "' mode=" << mode_name(s.mode) << " handles=" << s.handles
       << " producers=" << prod << " consumers=" << cons << '\n';
  }
  return os.str();
}

}  // namespace vl::endpoints
