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

#include <memory>
#include <random>
#include <optional>
#include <string>
#include <vector>

#include "vl/workloads/system.hpp"

namespace vl::workloads {

/// One thread's attachment to a channel. Operations never block.
class Port {
 public:
  explicit Port(CoreId core) : core_(core) {}
  virtual ~Port() = default;
  Port(const Port&) = delete;
  Port& operator=(const Port&) = delete;

  /// False when the queue pushed back; the caller retries later.
  virtual sim::Task<bool> try_send(Payload m) = 0;
  virtual sim::Task<std::optional<Payload>> try_recv() = 0;

  CoreId core() const noexcept { return core_; }
  std::uint64_t sent = 0, received = 0, send_retries = 0, empty_polls = 0;
  /// Cycles spent inside the try_send calls that were accepted.
  Cycle accepted_send_cycles = 0;

 private:
  CoreId core_;
};

struct ChannelOptions {
  std::uint32_t vl_ring_lines = 8;
  std::uint32_t queue_capacity = 256;
};

/// A named M:N queue with one port per producer and per consumer thread.
class Channel {
 public:
  Channel(std::string name, std::vector<std::unique_ptr<Port>> producers, std::vector<std::unique_ptr<Port>> consumers)
      : name_(std::move(name)), producers_(std::move(producers)), consumers_(std::move(consumers)) {}
  virtual ~Channel() = default;

  const std::string& name() const noexcept { return name_; }
  Port& producer(std::size_t i) { return *producers_.at(i); }
  Port& consumer(std::size_t i) { return *consumers_.at(i); }
  std::size_t num_producers() const noexcept { return producers_.size(); }
  std::size_t num_consumers() const noexcept { return consumers_.size(); }
  std::uint64_t delivered() const noexcept;
  std::uint64_t sent() const noexcept;

 private:
  std::string name_;
  std::vector<std::unique_ptr<Port>> producers_, consumers_;
};

std::unique_ptr<Channel> make_channel(System& sys, Backend backend, const std::string& name,
                                      const std::vector<CoreId>& producers, const std::vector<CoreId>& consumers,
                                      const ChannelOptions& opts = {});

/// Retries until the queue takes the message, sleeping `backoff` between tries.
/// With `jitter`, each sleep is drawn uniformly from [backoff/2, 3*backoff/2].
sim::Task<void> send(sim::Scheduler& s, Port& p, Payload m, Cycle backoff, std::mt19937_64* jitter = nullptr);
/// Polls until a message arrives, sleeping `backoff` after each empty poll.
sim::Task<Payload> recv(sim::Scheduler& s, Port& p, Cycle backoff, std::mt19937_64* jitter = nullptr);

}  // namespace vl::workloads
