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

#include <coroutine>
#include <cstdint>
#include <exception>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "vl/sim/task.hpp"

namespace vl::sim {

using Cycle = std::uint64_t;

/// Raised when the timeline runs past its watchdog or stalls with live actors.
class SimulationStall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Single-threaded discrete-event timeline. Coroutine actors suspend on
/// sleep() and are resumed in (time, insertion order).
class Scheduler {
 public:
  Scheduler() = default;
  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  Cycle now() const noexcept { return now_; }

  struct SleepAwaiter {
    Scheduler* sched;
    Cycle delay;
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h) { sched->schedule_at(sched->now_ + delay, h); }
    void await_resume() const noexcept {}
  };

  /// Suspends the calling coroutine for `cycles`; zero yields to other
  /// actors ready at the same cycle.
  SleepAwaiter sleep(Cycle cycles) { return SleepAwaiter{this, cycles}; }

  void schedule_at(Cycle at, std::coroutine_handle<> h);

  /// Takes ownership of a root actor; it starts at the current cycle.
  void spawn(Task<void> task);

  /// Runs until every event is consumed. Rethrows the first actor failure.
  /// Throws SimulationStall if `deadline` is passed or roots never finish.
  void run(Cycle deadline = ~Cycle{0});

  std::uint64_t events_processed() const noexcept { return events_; }
  std::size_t live_roots() const;

  void report_failure(std::exception_ptr e) noexcept;

 private:
  struct Entry {
    Cycle time;
    std::uint64_t seq;
    std::coroutine_handle<> handle;
    bool operator>(const Entry& o) const noexcept {
      return time != o.time ? time > o.time : seq > o.seq;
    }
  };

  Cycle now_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t events_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
  std::vector<Task<void>> roots_;
  std::exception_ptr failure_;
};

}  // namespace vl::sim
