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

#include <deque>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "vl/vlrd/vlrd.hpp"

namespace {

using namespace vl;
using namespace vl::vlrd;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Line tagged(std::uint64_t v) {
  Line l{};
  store_word(l, 0, v);
  return l;
}

TEST(VlrdTrace, ReferenceScenarioMatchesGolden) {
  const std::string golden = read_file(std::string(VLSIM_SOURCE_DIR) + "/tests/golden/reference_trace.txt");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(reference_scenario_trace(), golden);
}

TEST(VlrdTrace, EmptyDeviceTickIsIdle) {
  Vlrd d(VlrdConfig{});
  const auto r = d.pipeline_tick();
  EXPECT_TRUE(r.idle());
  EXPECT_EQ(format_trace(r), "1 S1 -\n1 S2 -\n1 S3 -\n");
}

TEST(Vlrd, RejectsBadConfiguration) {
  EXPECT_THROW(Vlrd(VlrdConfig{0, 4}), VlrdFault);
  EXPECT_THROW(Vlrd(VlrdConfig{4, 0}), VlrdFault);
  EXPECT_THROW(Vlrd(VlrdConfig{kLinkTabRows + 1, 4}), VlrdFault);
}

TEST(Vlrd, FirstPushFillsSlotOne) {
  Vlrd d(VlrdConfig{});
  const auto r = d.accept_producer_packet(1, tagged(1), 0);
  EXPECT_EQ(r.status, Status::Ack);
  EXPECT_EQ(r.slot, 1);
  EXPECT_EQ(d.registers().PIHR, 1);
  EXPECT_EQ(d.registers().PITR, 1);
  EXPECT_EQ(d.registers().PIFR, 2);
}

TEST(Vlrd, MinimalDeviceNacksSecondItem) {
  Vlrd d(VlrdConfig{1, 1});
  EXPECT_EQ(d.accept_producer_packet(0, tagged(1), 0).status, Status::Ack);
  EXPECT_EQ(d.accept_producer_packet(0, tagged(2), 1).status, Status::Nack);
  EXPECT_EQ(d.accept_consumer_request(0, 0x40, 0, 2).status, Status::Ack);
  EXPECT_EQ(d.accept_consumer_request(0, 0x80, 0, 3).status, Status::Nack);
}

TEST(Vlrd, CapacityOracleKPlusOne) {
  for (std::uint32_t k : {1u, 4u, 16u, 256u}) {
    Vlrd d(VlrdConfig{16, k});
    for (std::uint32_t i = 0; i < k; ++i) {
      ASSERT_EQ(d.accept_producer_packet(i % 16, tagged(i), i).status, Status::Ack) << k;
      d.advance_to(i + 1);
    }
    EXPECT_EQ(d.accept_producer_packet(0, tagged(k), k + 1).status, Status::Nack) << k;
    EXPECT_EQ(d.prod_occupancy(), k);
    EXPECT_FALSE(d.check_lists().has_value());
  }
}

TEST(Vlrd, PortAcceptsOnePacketPerCycle) {
  Vlrd d(VlrdConfig{});
  EXPECT_EQ(d.accept_producer_packet(0, tagged(1), 5).accepted_at, 5u);
  EXPECT_EQ(d.accept_producer_packet(0, tagged(2), 5).accepted_at, 6u);
  EXPECT_EQ(d.accept_consumer_request(0, 0x40, 0, 5).accepted_at, 5u);
}

TEST(Vlrd, InterleavedRequestsShareOneInputList) {
  Vlrd d(VlrdConfig{});
  d.accept_consumer_request(3, 0x40, 0, 0);
  d.accept_consumer_request(5, 0x80, 0, 1);
  d.accept_consumer_request(3, 0xc0, 0, 2);
  // Before any tick the per-SQI lists are empty and the input list holds all three.
  EXPECT_EQ(d.link_row(3), LinkRow{});
  EXPECT_EQ(d.registers().CIHR, 1);
  EXPECT_EQ(d.cons_entry(1).nextIn, 2);
  EXPECT_EQ(d.cons_entry(2).nextIn, 3);
  d.advance_to(10);
  EXPECT_EQ(d.link_row(3).consHead, 1);
  EXPECT_EQ(d.cons_entry(1).nextL, 3);
  EXPECT_EQ(d.link_row(3).consTail, 3);
  EXPECT_EQ(d.link_row(5).consHead, 2);
  EXPECT_EQ(d.registers().CIHR, kNull);
}

TEST(Vlrd, SqiQuotaNacksOnlyTheFullQueue) {
  Vlrd d(VlrdConfig{4, 8, 2});
  d.set_injector([](CoreId, Addr, const Line&, Cycle) { return true; });
  EXPECT_EQ(d.accept_producer_packet(1, tagged(1), 0).status, Status::Ack);
  EXPECT_EQ(d.accept_producer_packet(1, tagged(2), 1).status, Status::Ack);
  EXPECT_EQ(d.accept_producer_packet(1, tagged(3), 2).status, Status::Nack);
  EXPECT_EQ(d.accept_producer_packet(2, tagged(4), 3).status, Status::Ack);
  EXPECT_EQ(d.prod_occupancy(1), 2u);
  EXPECT_EQ(d.prod_occupancy(2), 1u);
  d.accept_consumer_request(1, 0x40, 0, 4);
  d.advance_to(30);
  EXPECT_EQ(d.prod_occupancy(1), 1u);
  EXPECT_EQ(d.accept_producer_packet(1, tagged(5), 31).status, Status::Ack);
  EXPECT_FALSE(d.check_lists().has_value());
}

TEST(Vlrd, MappedEntryIsInjectedAndFreed) {
  Vlrd d(VlrdConfig{});
  std::vector<std::tuple<CoreId, Addr, std::uint64_t>> got;
  d.set_injector([&](CoreId c, Addr a, const Line& l, Cycle) {
    got.emplace_back(c, a, load_word(l, 0));
    return true;
  });
  d.accept_producer_packet(1, tagged(42), 0);
  d.accept_consumer_request(1, 0x1000, 3, 0);
  d.advance_to(20);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0], std::make_tuple(CoreId{3}, Addr{0x1000}, std::uint64_t{42}));
  EXPECT_EQ(d.prod_occupancy(), 0u);
  EXPECT_EQ(d.cons_occupancy(), 0u);
  EXPECT_TRUE(d.quiescent());
}

TEST(Vlrd, RejectedEntryReturnsToLinkHead) {
  Vlrd d(VlrdConfig{});
  bool accept = false;
  std::vector<std::uint64_t> delivered;
  d.set_injector([&](CoreId, Addr, const Line& l, Cycle) {
    if (accept) delivered.push_back(load_word(l, 0));
    return accept;
  });
  d.accept_producer_packet(0, tagged(1), 0);
  d.accept_producer_packet(0, tagged(2), 1);
  d.accept_consumer_request(0, 0x40, 0, 2);
  d.advance_to(30);
  EXPECT_EQ(d.stats().injections_rejected, 1u);
  EXPECT_EQ(d.link_row(0).prodHead, 1);  // first entry back at the head
  EXPECT_EQ(d.prod_entry(1).nextL, 2);
  EXPECT_FALSE(d.check_lists().has_value());
  accept = true;
  d.accept_consumer_request(0, 0x80, 0, 31);
  d.accept_consumer_request(0, 0xc0, 0, 32);
  d.advance_to(60);
  EXPECT_EQ(delivered, (std::vector<std::uint64_t>{1, 2}));
}

TEST(Vlrd, EmissionFollowsOutListOrder) {
  Vlrd d(VlrdConfig{});
  std::vector<CoreId> order;
  d.set_injector([&](CoreId c, Addr, const Line&, Cycle) {
    order.push_back(c);
    return true;
  });
  d.accept_consumer_request(0, 0x40, 1, 0);
  d.accept_consumer_request(1, 0x80, 2, 1);
  d.accept_producer_packet(1, tagged(1), 2);
  d.accept_producer_packet(0, tagged(2), 3);
  d.advance_to(30);
  EXPECT_EQ(order, (std::vector<CoreId>{2, 1}));
}

TEST(VlrdWidths, MatchesStorageBudget) {
  const auto w = compute_bit_widths(256);
  EXPECT_EQ(w.pointer, 8u);
  EXPECT_EQ(w.link_row, 32u);
  EXPECT_GE(w.cons_entry, 68u);
  EXPECT_LE(w.cons_entry, 72u);
  EXPECT_GE(w.prod_entry, 512u);
  EXPECT_LE(w.prod_entry, 590u);
}

// Reference model: per-SQI FIFO of ACKed pushes; deliveries accepted by the
// injector must come out of each FIFO in order, and nothing twice.
struct FifoOracle {
  std::map<std::uint32_t, std::deque<std::uint64_t>> pending;
  std::string error;

  void acked(std::uint32_t sqi, std::uint64_t v) { pending[sqi].push_back(v); }
  void delivered(std::uint32_t sqi, std::uint64_t v) {
    auto& q = pending[sqi];
    if (q.empty() || q.front() != v) {
      if (error.empty()) error = "SQI " + std::to_string(sqi) + " delivered " + std::to_string(v) + " out of order";
      return;
    }
    q.pop_front();
  }
  bool drained() const {
    for (const auto& [s, q] : pending) {
      if (!q.empty()) return false;
    }
    return true;
  }
};

struct RandomRun {
  std::uint32_t sqis, entries;
  double reject_p;
  std::uint64_t seed;
};

void run_random(const RandomRun& cfg) {
  std::mt19937_64 rng(cfg.seed);
  Vlrd d(VlrdConfig{cfg.sqis, cfg.entries});
  FifoOracle oracle;
  std::map<Addr, std::uint32_t> target_sqi;
  std::uint64_t next_value = 1;
  Addr next_tgt = 0x40;
  std::bernoulli_distribution reject(cfg.reject_p);
  std::map<Addr, std::uint64_t> first_delivery;
  d.set_injector([&](CoreId, Addr a, const Line& l, Cycle) {
    if (reject(rng)) return false;
    oracle.delivered(target_sqi.at(a), load_word(l, 0));
    EXPECT_FALSE(first_delivery.contains(a)) << "target reused";
    first_delivery[a] = load_word(l, 0);
    return true;
  });
  Cycle t = 0;
  for (int step = 0; step < 300; ++step) {
    const auto sqi = static_cast<std::uint32_t>(rng() % cfg.sqis);
    switch (rng() % 4) {
      case 0:
      case 1: {
        const std::uint64_t v = next_value++;
        if (d.accept_producer_packet(sqi, tagged(v), t).status == Status::Ack) oracle.acked(sqi, v);
        break;
      }
      case 2: {
        // Both buffers saturated with unmatched items is a device deadlock;
        // like the endpoints, bound outstanding demand below capacity.
        if (d.cons_occupancy() + 1 >= cfg.entries) break;
        target_sqi[next_tgt] = sqi;
        if (d.accept_consumer_request(sqi, next_tgt, 0, t).status == Status::Ack) next_tgt += 0x40;
        break;
      }
      default:
        break;
    }
    d.advance_to(t);
    ++t;
    ASSERT_FALSE(d.check_lists().has_value()) << *d.check_lists() << " seed " << cfg.seed;
    ASSERT_LE(d.prod_occupancy(), cfg.entries);
    ASSERT_LE(d.cons_occupancy(), cfg.entries);
  }
  // Drain: ask on a SQI with pending data.
  for (int round = 0; round < 4000 && !oracle.drained(); ++round) {
    for (const auto& [sqi, q] : oracle.pending) {
      // Only ask when some buffered data is not yet matched to a request.
      std::size_t waiting = 0, unmatched = 0;
      for (Slot c = 1; c <= cfg.entries; ++c) {
        waiting += d.cons_entry(c).valid && d.cons_entry(c).sqi == sqi;
        unmatched += d.prod_entry(c).valid && !d.prod_entry(c).outValid && d.prod_entry(c).sqi == sqi;
      }
      if (q.empty() || unmatched <= waiting) continue;
      target_sqi[next_tgt] = sqi;
      if (d.accept_consumer_request(sqi, next_tgt, 0, t).status == Status::Ack) next_tgt += 0x40;
      break;
    }
    d.advance_to(t);
    t += 3;
  }
  d.advance_to(t + 50);
  EXPECT_TRUE(oracle.error.empty()) << oracle.error << " seed " << cfg.seed;
  if (!oracle.drained()) {
    std::string left;
    for (const auto& [sqi, q] : oracle.pending) left += " SQI" + std::to_string(sqi) + ":" + std::to_string(q.size());
    for (std::uint32_t q = 0; q < cfg.sqis; ++q) {
      const auto& r = d.link_row(q);
      left += " [" + std::to_string(r.prodHead) + "," + std::to_string(r.prodTail) + "," + std::to_string(r.consHead) + "," + std::to_string(r.consTail) + "]";
    }
    left += " CIHR=" + std::to_string(d.registers().CIHR) + " PIHR=" + std::to_string(d.registers().PIHR) + " POHR=" + std::to_string(d.registers().POHR);
    ADD_FAILURE() << "undelivered" << left << " prod=" << d.prod_occupancy() << " cons=" << d.cons_occupancy()
                  << " seed " << cfg.seed;
  }
  EXPECT_FALSE(d.check_lists().has_value());
}

TEST(VlrdProperty, RandomInterleavingsPreservePerSqiFifo) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) run_random({3, 8, 0.0, seed});
}

TEST(VlrdProperty, FifoSurvivesRandomRejections) {
  for (std::uint64_t seed = 100; seed <= 160; ++seed) run_random({3, 8, 0.3, seed});
}

TEST(VlrdProperty, SmallDeviceBackPressure) {
  for (std::uint64_t seed = 500; seed <= 540; ++seed) run_random({16, 4, 0.2, seed});
}

// Without rejections the k-th ACKed push on a SQI goes to the k-th request.
TEST(VlrdProperty, MatchingPairsEqualArrivalOrder) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    std::mt19937_64 rng(seed);
    Vlrd d(VlrdConfig{2, 64});
    std::map<std::uint32_t, std::vector<std::uint64_t>> pushes;
    std::map<std::uint32_t, std::vector<Addr>> requests;
    std::vector<std::pair<Addr, std::uint64_t>> pairs;
    d.set_injector([&](CoreId, Addr a, const Line& l, Cycle) {
      pairs.emplace_back(a, load_word(l, 0));
      return true;
    });
    Cycle t = 0;
    for (int i = 0; i < 40; ++i) {
      const auto sqi = static_cast<std::uint32_t>(rng() % 2);
      if (rng() % 2) {
        const std::uint64_t v = 1000 + i;
        if (d.accept_producer_packet(sqi, tagged(v), t).status == Status::Ack) pushes[sqi].push_back(v);
      } else {
        const Addr a = 0x40 * (i + 1);
        if (d.accept_consumer_request(sqi, a, 0, t).status == Status::Ack) requests[sqi].push_back(a);
      }
      d.advance_to(t++);
    }
    d.advance_to(t + 200);
    std::map<Addr, std::uint64_t> want;
    for (std::uint32_t s = 0; s < 2; ++s) {
      const auto n = std::min(pushes[s].size(), requests[s].size());
      for (std::size_t k = 0; k < n; ++k) want[requests[s][k]] = pushes[s][k];
    }
    const std::map<Addr, std::uint64_t> got(pairs.begin(), pairs.end());
    EXPECT_EQ(got, want) << "seed " << seed;
  }
}

}  // namespace
