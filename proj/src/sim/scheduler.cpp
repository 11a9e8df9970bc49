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

#include "vl/sim/scheduler.hpp"

#include <algorithm>

namespace vl::sim {

void detail::PromiseBase::unhandled_exception() noexcept {
  error = std::current_exception();
  if (root_owner != nullptr) root_owner->report_failure(error);
}

void Scheduler::schedule_at(Cycle at, std::coroutine_handle<> h) {
  queue_.push(Entry{std::max(at, now_), seq_++, h});
}

void Scheduler::spawn(Task<void> task) {
  task.handle().promise().root_owner = this;
  schedule_at(now_, task.handle());
  roots_.push_back(std::move(task));
}

void Scheduler::report_failure(std::exception_ptr e) noexcept {
  if (!failure_) failure_ = e;
}

std::size_t Scheduler::live_roots() const {
  return static_cast<std::size_t>(
      std::count_if(roots_.begin(), roots_.end(), [](const Task<void>& t) { return !t.done(); }));
}

void Scheduler::run(Cycle deadline) {
  while (!queue_.empty() && !failure_) {
    Entry e = queue_.top();
    if (e.time > deadline) {
      queue_ = {};
      roots_.clear();
      throw SimulationStall("timeline passed deadline at cycle " + std::to_string(e.time));
    }
    queue_.pop();
    now_ = e.time;
    ++events_;
    e.handle.resume();
  }
  if (failure_) {
    auto f = failure_;
    failure_ = nullptr;
    queue_ = {};
    roots_.clear();
    std::rethrow_exception(f);
  }
  if (const auto live = live_roots(); live != 0) {
    roots_.clear();
    throw SimulationStall(std::to_string(live) + " actors suspended with no pending events");
  }
  roots_.clear();
}

}  // namespace vl::sim
