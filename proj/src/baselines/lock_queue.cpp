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

#include "vl/baselines/lock_queue.hpp"

#include <algorithm>

namespace vl::baselines {

LockQueue::LockQueue(fabric::AddressSpace& space, LockQueueOptions opts)
    : capacity_(opts.capacity), lock_(opts.lock, space) {
  if (capacity_ == 0) throw QueueError("queue capacity must be positive");
  meta_ = space.alloc_shared(kLineBytes);
  slots_ = space.alloc_shared(capacity_ * kLineBytes);
}

bool LockQueue::owns(Addr a) const noexcept {
  a &= ~Addr{kLineBytes - 1};
  return a == lock_.addr() || a == meta_ || (a >= slots_ && a < slots_ + capacity_ * kLineBytes);
}

sim::Task<QueueStatus> LockQueue::push(fabric::Core& core, Payload payload) {
  if (payload.empty() || payload.size() > kMaxPayload) throw QueueError("queue payload must be 1..63 bytes");
  co_await lock_.acquire(core);
  const Line meta = co_await core.load(meta_);
  const std::uint64_t head = load_word(meta, 0), tail = load_word(meta, 1);
  if (tail - head == capacity_) {
    co_await lock_.release(core);
    ++stats_.full;
    co_return QueueStatus::Full;
  }
  Line l{};
  l[0] = static_cast<std::uint8_t>(payload.size());
  std::copy(payload.begin(), payload.end(), l.begin() + 1);
  co_await core.store(slots_ + (tail % capacity_) * kLineBytes, l);
  co_await core.store_word(meta_, 1, tail + 1);
  co_await lock_.release(core);
  ++stats_.pushes;
  co_return QueueStatus::Ok;
}

sim::Task<std::optional<Payload>> LockQueue::pop(fabric::Core& core) {
  co_await lock_.acquire(core);
  const Line meta = co_await core.load(meta_);
  const std::uint64_t head = load_word(meta, 0), tail = load_word(meta, 1);
  if (head == tail) {
    co_await lock_.release(core);
    ++stats_.empty;
    co_return std::nullopt;
  }
  const Line l = co_await core.load(slots_ + (head % capacity_) * kLineBytes);
  co_await core.store_word(meta_, 0, head + 1);
  co_await lock_.release(core);
  ++stats_.pops;
  co_return Payload(l.begin() + 1, l.begin() + 1 + l[0]);
}

}  // namespace vl::baselines
