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

#include "vl/workloads/channel.hpp"

namespace vl::workloads {

namespace {

class VlPort final : public Port {
 public:
  VlPort(endpoints::Endpoint ep) : Port(ep.owner()), ep_(std::move(ep)) {}
  sim::Task<bool> try_send(Payload m) override {
    co_return co_await ep_.enqueue(std::move(m)) == endpoints::EnqueueStatus::Ok;
  }
  sim::Task<std::optional<Payload>> try_recv() override { return ep_.dequeue(); }

 private:
  endpoints::Endpoint ep_;
};

template <class Q>
class SharedQueuePort final : public Port {
 public:
  SharedQueuePort(std::shared_ptr<Q> q, fabric::Core& core) : Port(core.id()), q_(std::move(q)), core_(&core) {}
  sim::Task<bool> try_send(Payload m) override {
    co_return co_await q_->push(*core_, std::move(m)) == baselines::QueueStatus::Ok;
  }
  sim::Task<std::optional<Payload>> try_recv() override { return q_->pop(*core_); }

 private:
  std::shared_ptr<Q> q_;
  fabric::Core* core_;
};

template <class Q, class Opts>
std::unique_ptr<Channel> shared_channel(System& sys, const std::string& name, const std::vector<CoreId>& producers,
                                        const std::vector<CoreId>& consumers, Opts opts) {
  auto q = std::make_shared<Q>(sys.space, opts);
  std::vector<std::unique_ptr<Port>> ps, cs;
  for (CoreId c : producers) ps.push_back(std::make_unique<SharedQueuePort<Q>>(q, sys.core(c)));
  for (CoreId c : consumers) cs.push_back(std::make_unique<SharedQueuePort<Q>>(q, sys.core(c)));
  return std::make_unique<Channel>(name, std::move(ps), std::move(cs));
}

}  // namespace

std::uint64_t Channel::delivered() const noexcept {
  std::uint64_t n = 0;
  for (const auto& p : consumers_) n += p->received;
  return n;
}

std::uint64_t Channel::sent() const noexcept {
  std::uint64_t n = 0;
  for (const auto& p : producers_) n += p->sent;
  return n;
}

std::unique_ptr<Channel> make_channel(System& sys, Backend backend, const std::string& name,
                                      const std::vector<CoreId>& producers, const std::vector<CoreId>& consumers,
                                      const ChannelOptions& opts) {
  switch (backend) {
    case Backend::Vl: {
      const auto sqi = sys.rt.open(name, endpoints::OpenMode::ReadWrite);
      std::vector<std::unique_ptr<Port>> ps, cs;
      const endpoints::EndpointOptions eo{.ring_lines = opts.vl_ring_lines};
      for (CoreId c : producers) {
        ps.push_back(std::make_unique<VlPort>(sys.rt.map(sqi, endpoints::Prot::Write, c, eo)));
      }
      for (CoreId c : consumers) {
        cs.push_back(std::make_unique<VlPort>(sys.rt.map(sqi, endpoints::Prot::Read, c, eo)));
      }
      return std::make_unique<Channel>(name, std::move(ps), std::move(cs));
    }
    case Backend::Cas:
      return shared_channel<baselines::CasRingQueue>(sys, name, producers, consumers,
                                                     baselines::CasRingOptions{.capacity = opts.queue_capacity});
    case Backend::CasUnbounded:
      return shared_channel<baselines::CasRingQueue>(sys, name, producers, consumers,
                                                     baselines::CasRingOptions{.unbounded = true});
    case Backend::Lock:
      return shared_channel<baselines::LockQueue>(sys, name, producers, consumers,
                                                  baselines::LockQueueOptions{.capacity = opts.queue_capacity});
  }
  throw std::invalid_argument("unknown backend");
}

namespace {

Cycle pause(Cycle backoff, std::mt19937_64* jitter) {
  if (jitter == nullptr || backoff == 0) return backoff;
  return backoff / 2 + (*jitter)() % (backoff + 1);
}

}  // namespace

sim::Task<void> send(sim::Scheduler& s, Port& p, Payload m, Cycle backoff, std::mt19937_64* jitter) {
  for (;;) {
    const Cycle t0 = s.now();
    if (co_await p.try_send(m)) {
      p.accepted_send_cycles += s.now() - t0;
      break;
    }
    ++p.send_retries;
    if (const Cycle d = pause(backoff, jitter)) co_await s.sleep(d);
  }
  ++p.sent;
}

sim::Task<Payload> recv(sim::Scheduler& s, Port& p, Cycle backoff, std::mt19937_64* jitter) {
  for (;;) {
    if (auto m = co_await p.try_recv()) {
      ++p.received;
      co_return std::move(*m);
    }
    ++p.empty_polls;
    if (const Cycle d = pause(backoff, jitter)) co_await s.sleep(d);
  }
}

}  // namespace vl::workloads
