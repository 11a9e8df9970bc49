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

#include "vl/baselines/cas_ring.hpp"

#include <algorithm>

namespace vl::baselines {

// Slot i starts at turn i; the stored word is turn - i so fresh zeroed
// memory is a valid initial state in both modes.

CasRingQueue::CasRingQueue(fabric::AddressSpace& space, CasRingOptions opts)
    : capacity_(opts.unbounded ? opts.unbounded_lines : opts.capacity), unbounded_(opts.unbounded) {
  if (capacity_ == 0) throw QueueError("ring capacity must be positive");
  head_ = space.alloc_shared(kLineBytes);
  tail_ = space.alloc_shared(kLineBytes);
  slot_lines_ = capacity_;
  slots_ = space.alloc_shared(slot_lines_ * kLineBytes);
}

bool CasRingQueue::owns(Addr a) const noexcept {
  a &= ~Addr{kLineBytes - 1};
  return a == head_ || a == tail_ || (a >= slots_ && a < slots_ + slot_lines_ * kLineBytes);
}

sim::Task<QueueStatus> CasRingQueue::push(fabric::Core& core, Payload payload) {
  if (payload.empty() || payload.size() > kMaxPayload) throw QueueError("ring payload must be 1..55 bytes");
  for (;;) {
    const std::uint64_t pos = co_await core.load_word(tail_, 0);
    if (unbounded_ && pos >= slot_lines_) throw QueueError("unbounded ring ran out of lines");
    const Addr slot = slot_addr(pos);
    const std::uint64_t turn = co_await core.load_word(slot, kTurnWord);
    const auto diff = static_cast<std::int64_t>(turn - (pos - index(pos)));
    if (diff < 0) {
      ++stats_.full;
      co_return QueueStatus::Full;
    }
    if (diff > 0) continue;  // stale tail
    const auto r = co_await core.cas(tail_, 0, pos, pos + 1);
    if (!r.success) {
      ++stats_.cas_failures;
      continue;
    }
    Line l{};
    l[0] = static_cast<std::uint8_t>(payload.size());
    std::copy(payload.begin(), payload.end(), l.begin() + 1);
    store_word(l, kTurnWord, pos + 1 - index(pos));
    co_await core.store(slot, l);
    ++stats_.pushes;
    co_return QueueStatus::Ok;
  }
}

sim::Task<std::optional<Payload>> CasRingQueue::pop(fabric::Core& core) {
  for (;;) {
    const std::uint64_t pos = co_await core.load_word(head_, 0);
    const Addr slot = slot_addr(pos);
    const Line l = co_await core.load(slot);
    const auto diff = static_cast<std::int64_t>(load_word(l, kTurnWord) - (pos + 1 - index(pos)));
    if (diff < 0) {
      ++stats_.empty;
      co_return std::nullopt;
    }
    if (diff > 0) continue;
    const auto r = co_await core.cas(head_, 0, pos, pos + 1);
    if (!r.success) {
      ++stats_.cas_failures;
      continue;
    }
    Payload out(l.begin() + 1, l.begin() + 1 + l[0]);
    if (!unbounded_) co_await core.store_word(slot, kTurnWord, pos + capacity_ - index(pos));
    ++stats_.pops;
    co_return out;
  }
}

}  // namespace vl::baselines
