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

#include <gtest/gtest.h>

#include "vl/fabric/core.hpp"
#include "vl/isa/isa.hpp"

namespace {

using namespace vl;
using isa::VlStatus;
using sim::Task;

struct Rig {
  sim::Scheduler sched;
  fabric::Fabric fab;
  vlrd::Vlrd dev;
  vlrd::AddressLayout layout;
  isa::VlIsa vl;

  explicit Rig(std::uint32_t entries = 16)
      : fab(config()), dev(vlrd::VlrdConfig{16, entries}, fab), vl(sched, fab, dev, layout) {}

  static fabric::SimConfig config() {
    fabric::SimConfig c;
    c.num_cores = 4;
    return c;
  }
  Addr dev_addr(std::uint32_t sqi, std::uint32_t page = 0) { return layout.encode({0, sqi, page, 0}); }
};

constexpr Addr kProdLine = Addr{1} << 32;
constexpr Addr kConsLine = (Addr{1} << 32) + (Addr{1} << 28);

Line payload(std::uint8_t b) {
  Line l{};
  l.fill(b);
  return l;
}

Task<void> select_then(Rig& r, CoreId c, Addr va, bool& done) {
  co_await r.vl.select(c, va);
  done = true;
}

TEST(Isa, SelectOnResidentExclusiveLineIsSilent) {
  Rig r;
  r.fab.acquire_exclusive(0, kProdLine, 0);
  const auto before = r.fab.snapshot_stats();
  bool done = false;
  r.sched.spawn(select_then(r, 0, kProdLine, done));
  r.sched.run();
  EXPECT_TRUE(done);
  EXPECT_EQ(r.vl.state(0).latched_pa, kProdLine);
  EXPECT_TRUE(r.fab.probe(0, kProdLine)->selected);
  const auto after = r.fab.snapshot_stats();
  EXPECT_EQ(after.snoops, before.snoops);
  EXPECT_EQ(after.mem_transactions, before.mem_transactions);
}

TEST(Isa, SelectOnMissFillsExclusive) {
  Rig r;
  bool done = false;
  r.sched.spawn(select_then(r, 0, kProdLine, done));
  r.sched.run();
  EXPECT_EQ(r.fab.state_of(0, kProdLine), MesiState::Exclusive);
  EXPECT_EQ(r.fab.snapshot_stats().mem_transactions, 1u);
}

Task<void> select_twice(Rig& r) {
  co_await r.vl.select(0, kProdLine);
  co_await r.vl.select(0, kProdLine + kLineBytes);
}

TEST(Isa, SecondSelectOverwritesLatch) {
  Rig r;
  r.sched.spawn(select_twice(r));
  r.sched.run();
  EXPECT_EQ(r.vl.state(0).latched_pa, kProdLine + kLineBytes);
  EXPECT_FALSE(r.fab.probe(0, kProdLine)->selected);
  EXPECT_TRUE(r.fab.probe(0, kProdLine + kLineBytes)->selected);
}

Task<void> push_only(Rig& r, VlStatus& out) { out = co_await r.vl.push(0, r.dev_addr(1)); }

TEST(Isa, PushWithoutSelectFailsWithoutTraffic) {
  Rig r;
  VlStatus s = VlStatus::Ok;
  r.sched.spawn(push_only(r, s));
  r.sched.run();
  EXPECT_EQ(s, VlStatus::NoSelect);
  EXPECT_EQ(r.fab.snapshot_stats(), fabric::StatCounters{});
  EXPECT_EQ(r.dev.stats().prod_acks + r.dev.stats().prod_nacks, 0u);
}

Task<void> produce(Rig& r, CoreId c, Addr line, std::uint8_t v, std::uint32_t sqi, VlStatus& out) {
  co_await r.sched.sleep(0);
  r.fab.core_store(c, line, payload(v), r.sched.now());
  co_await r.vl.select(c, line);
  out = co_await r.vl.push(c, r.dev_addr(sqi));
}

TEST(Isa, PushAckZeroesSourceLine) {
  Rig r;
  VlStatus s = VlStatus::Nack;
  r.sched.spawn(produce(r, 0, kProdLine, 9, 1, s));
  r.sched.run();
  EXPECT_EQ(s, VlStatus::Ok);
  EXPECT_EQ(r.fab.peek(kProdLine), Line{});
  EXPECT_EQ(r.fab.state_of(0, kProdLine), MesiState::Exclusive);
  EXPECT_EQ(r.dev.prod_occupancy(), 1u);
  EXPECT_EQ(r.vl.state(0).pushes_in_flight, 0u);
  EXPECT_FALSE(r.vl.state(0).latched_pa.has_value());
}

TEST(Isa, PushStatusReturnsWithinRoundTrip) {
  Rig r;
  VlStatus s = VlStatus::Nack;
  r.sched.spawn(produce(r, 0, kProdLine, 9, 1, s));
  r.sched.run();
  const auto stats = r.fab.snapshot_stats();
  const auto& h = stats.latency(fabric::OpKind::Push);
  ASSERT_EQ(h.count, 1u);
  EXPECT_EQ(h.max, r.fab.config().lat_vlrd_roundtrip);
}

Task<void> produce_retry(Rig& r, std::vector<VlStatus>& out) {
  for (int i = 0; i < 2; ++i) {
    VlStatus s{};
    co_await produce(r, 0, kProdLine + i * kLineBytes, static_cast<std::uint8_t>(i + 1), 1, s);
    out.push_back(s);
  }
  // Device full: the second push NACKs and its data stays put.
  co_await r.sched.sleep(500);
  co_await r.vl.select(0, kProdLine + kLineBytes);
  out.push_back(co_await r.vl.push(0, r.dev_addr(1)));
}

Task<void> late_consumer(Rig& r, VlStatus& out) {
  co_await r.sched.sleep(60);
  co_await r.vl.select(1, kConsLine);
  out = co_await r.vl.fetch(1, r.dev_addr(1));
}

TEST(Isa, NackLeavesDataForRetry) {
  Rig r(1);
  std::vector<VlStatus> st;
  VlStatus fs{};
  r.sched.spawn(produce_retry(r, st));
  r.sched.spawn(late_consumer(r, fs));
  r.sched.run();
  ASSERT_EQ(st.size(), 3u);
  EXPECT_EQ(st[0], VlStatus::Ok);
  EXPECT_EQ(st[1], VlStatus::Nack);
  EXPECT_EQ(st[2], VlStatus::Ok);
  EXPECT_EQ(fs, VlStatus::Ok);
  EXPECT_EQ(r.fab.peek(kConsLine), payload(1));
  EXPECT_EQ(r.fab.peek(kProdLine + kLineBytes), Line{});
}

Task<void> consume_after(Rig& r, Cycle wait, VlStatus& out, Cycle& fetched_at) {
  co_await r.sched.sleep(wait);
  co_await r.vl.select(1, kConsLine);
  fetched_at = r.sched.now();
  out = co_await r.vl.fetch(1, r.dev_addr(1));
  // Poll until the injection lands.
  for (int i = 0; i < 200; ++i) {
    fabric::Core core(r.sched, r.fab, 1);
    const auto l = co_await core.load(kConsLine);
    if (l != Line{}) break;
  }
}

TEST(Isa, FetchWithBufferedDataInjectsQuickly) {
  Rig r;
  VlStatus ps{}, fs{};
  Cycle t_fetch = 0;
  r.sched.spawn(produce(r, 0, kProdLine, 7, 1, ps));
  r.sched.spawn(consume_after(r, 100, fs, t_fetch));
  r.sched.run();
  EXPECT_EQ(fs, VlStatus::Ok);
  EXPECT_EQ(r.fab.peek(kConsLine), payload(7));
  EXPECT_EQ(r.fab.state_of(1, kConsLine), MesiState::Exclusive);
  ASSERT_EQ(r.dev.stats().injections_accepted, 1u);
  const auto& cfg = r.fab.config();
  const auto* line = r.fab.probe(1, kConsLine);
  ASSERT_NE(line, nullptr);
  EXPECT_LE(line->ready_at - t_fetch, cfg.lat_vlrd_roundtrip + cfg.lat_c2c);
}

Task<void> fetch_only(Rig& r, VlStatus& out) {
  co_await r.vl.select(1, kConsLine);
  out = co_await r.vl.fetch(1, r.dev_addr(2));
}

TEST(Isa, FetchOnEmptySqiRegistersDemand) {
  Rig r;
  VlStatus s = VlStatus::Nack;
  r.sched.spawn(fetch_only(r, s));
  r.sched.run();
  r.dev.advance_to(r.sched.now() + 10);
  EXPECT_EQ(s, VlStatus::Ok);
  EXPECT_TRUE(r.fab.is_pushable(1, kConsLine));
  EXPECT_EQ(r.dev.link_row(2).consHead, 1);
}

Task<void> fetch_swap_refetch(Rig& r, std::vector<VlStatus>& st) {
  co_await r.vl.select(1, kConsLine);
  st.push_back(co_await r.vl.fetch(1, r.dev_addr(1)));
  r.vl.context_swap(1);
  co_await r.sched.sleep(200);  // producer pushes meanwhile; injection is rejected
  co_await r.vl.select(1, kConsLine);
  st.push_back(co_await r.vl.fetch(1, r.dev_addr(1)));
  co_await r.sched.sleep(100);
  fabric::Core core(r.sched, r.fab, 1);
  co_await core.load(kConsLine);
}

Task<void> produce_late(Rig& r, VlStatus& out) {
  co_await r.sched.sleep(50);
  co_await produce(r, 0, kProdLine, 5, 1, out);
}

TEST(Isa, ContextSwapRejectsInjectionUntilRearmed) {
  Rig r;
  std::vector<VlStatus> st;
  VlStatus ps{};
  r.sched.spawn(fetch_swap_refetch(r, st));
  r.sched.spawn(produce_late(r, ps));
  r.sched.run();
  EXPECT_EQ(r.dev.stats().injections_rejected, 1u);
  EXPECT_EQ(r.dev.stats().injections_accepted, 1u);
  EXPECT_EQ(r.fab.peek(kConsLine), payload(5));
}

Task<void> select_swap_push(Rig& r, VlStatus& out) {
  co_await r.vl.select(0, kProdLine);
  r.vl.context_swap(0);
  out = co_await r.vl.push(0, r.dev_addr(1));
}

TEST(Isa, SwapAfterSelectFailsPush) {
  Rig r;
  VlStatus s = VlStatus::Ok;
  r.sched.spawn(select_swap_push(r, s));
  r.sched.run();
  EXPECT_EQ(s, VlStatus::NoSelect);
}

Task<void> swap_mid_push(Rig& r) {
  co_await r.sched.sleep(3);
  r.vl.context_swap(0);
}

TEST(Isa, SwapWithPushInFlightFaults) {
  Rig r;
  VlStatus s{};
  r.sched.spawn(produce(r, 0, kProdLine, 1, 1, s));
  r.sched.spawn(swap_mid_push(r));
  EXPECT_THROW(r.sched.run(), isa::IsaFault);
}

Task<void> push_to(Rig& r, Addr dev) {
  co_await r.vl.select(0, kProdLine);
  co_await r.vl.push(0, dev);
}

TEST(Isa, UndecodableDeviceAddressFaults) {
  Rig r;
  r.sched.spawn(push_to(r, kProdLine));
  EXPECT_THROW(r.sched.run(), isa::IsaFault);
}

}  // namespace
