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
#include <string>
#include <string_view>
#include <vector>

#include "vl/fabric/core.hpp"
#include "vl/fabric/fabric.hpp"

namespace vl::baselines {

enum class LockKind { Cas, Ticket, Spin };

std::string_view to_string(LockKind k) noexcept;
LockKind parse_lock_kind(std::string_view s);

class LockFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Lock word(s) on one shared line.
///  Cas:    retry CAS(0 -> id+1) until it succeeds.
///  Spin:   test-and-test-and-set; spin on plain loads, CAS when free.
///  Ticket: word 0 = next ticket (CAS fetch-add), word 1 = now serving.
class Lock {
 public:
  Lock(LockKind kind, fabric::AddressSpace& space);

  sim::Task<void> acquire(fabric::Core& core);
  sim::Task<void> release(fabric::Core& core);

  LockKind kind() const noexcept { return kind_; }
  Addr addr() const noexcept { return addr_; }
  std::optional<CoreId> holder() const noexcept { return holder_; }
  std::uint64_t acquisitions() const noexcept { return acquisitions_; }
  /// Ticket locks only: tickets in the order they were granted.
  const std::vector<std::uint64_t>& grant_log() const noexcept { return grants_; }
  const std::vector<std::uint64_t>& ticket_log() const noexcept { return tickets_; }

 private:
  void enter(CoreId core);

  LockKind kind_;
  Addr addr_;
  std::optional<CoreId> holder_;
  std::uint64_t held_ticket_ = 0;
  std::uint64_t acquisitions_ = 0;
  std::vector<std::uint64_t> grants_, tickets_;
};

}  // namespace vl::baselines
