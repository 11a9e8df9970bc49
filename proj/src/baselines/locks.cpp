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

#include "vl/baselines/locks.hpp"

namespace vl::baselines {

std::string_view to_string(LockKind k) noexcept {
  switch (k) {
    case LockKind::Cas: return "cas";
    case LockKind::Ticket: return "ticket";
    case LockKind::Spin: return "spin";
  }
  return "?";
}

LockKind parse_lock_kind(std::string_view s) {
  if (s == "cas") return LockKind::Cas;
  if (s == "ticket") return LockKind::Ticket;
  if (s == "spin") return LockKind::Spin;
  throw std::invalid_argument("unknown lock kind '" + std::string(s) + "'");
}

Lock::Lock(LockKind kind, fabric::AddressSpace& space) : kind_(kind), addr_(space.alloc_shared(kLineBytes)) {}

void Lock::enter(CoreId core) {
  if (holder_) throw LockFault("mutual exclusion violated: lock already held");
  holder_ = core;
  ++acquisitions_;
}

sim::Task<void> Lock::acquire(fabric::Core& core) {
  const std::uint64_t me = core.id() + 1;
  switch (kind_) {
    case LockKind::Cas:
      while (!(co_await core.cas(addr_, 0, 0, me)).success) {
      }
      enter(core.id());
      break;
    case LockKind::Spin:
      for (;;) {
        while (co_await core.load_word(addr_, 0) != 0) {
        }
        if ((co_await core.cas(addr_, 0, 0, me)).success) break;
      }
      enter(core.id());
      break;
    case LockKind::Ticket: {
      std::uint64_t ticket = co_await core.load_word(addr_, 0);
      for (;;) {
        const auto r = co_await core.cas(addr_, 0, ticket, ticket + 1);
        if (r.success) break;
        ticket = r.observed;
      }
      tickets_.push_back(ticket);
      while (co_await core.load_word(addr_, 1) != ticket) {
      }
      enter(core.id());
      held_ticket_ = ticket;
      grants_.push_back(ticket);
      break;
    }
  }
}

sim::Task<void> Lock::release(fabric::Core& core) {
  if (holder_ != core.id()) throw LockFault("lock released by a core that does not hold it");
  holder_.reset();
  if (kind_ == LockKind::Ticket) {
    co_await core.store_word(addr_, 1, held_ticket_ + 1);
  } else {
    co_await core.store_word(addr_, 0, 0);
  }
}

}  // namespace vl::baselines
