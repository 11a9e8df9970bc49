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

#include <map>
#include <random>
#include <set>

#include "vl/fabric/fabric.hpp"

namespace {

using namespace vl;
using namespace vl::fabric;

SimConfig small_config(std::uint32_t cores = 4) {
  SimConfig c;
  c.num_cores = cores;
  return c;
}

Line filled(std::uint8_t b) {
  Line l;
  l.fill(b);
  return l;
}

constexpr Addr kA = 0x10000;

TEST(Fabric, FreshCountersAreZero) {
  Fabric f(small_config());
  EXPECT_EQ(f.snapshot_stats(), StatCounters{});
}

TEST(Fabric, LoadOfRemoteDirtyLineDowngradesBoth) {
  Fabric f(small_config());
  Cycle t = f.core_store(1, kA, filled(7), 0);
  ASSERT_EQ(f.state_of(1, kA), MesiState::Modified);
  const auto before = f.snapshot_stats();
  const auto r = f.core_load(0, kA, t);
  const auto after = f.snapshot_stats();
  EXPECT_EQ(after.snoops - before.snoops, 1u);
  EXPECT_EQ(after.writebacks - before.writebacks, 1u);
  EXPECT_EQ(f.state_of(0, kA), MesiState::Shared);
  EXPECT_EQ(f.state_of(1, kA), MesiState::Shared);
  EXPECT_EQ(r.value, filled(7));
  EXPECT_EQ(r.latency, f.config().lat_c2c);
  EXPECT_FALSE(f.check_invariants().has_value());
}

TEST(Fabric, LoadHitOnExclusiveCostsL1) {
  Fabric f(small_config());
  const Cycle t = f.core_load(0, kA, 0).latency;
  EXPECT_EQ(t, f.config().lat_mem);
  EXPECT_EQ(f.state_of(0, kA), MesiState::Exclusive);
  const auto r = f.core_load(0, kA, t);
  EXPECT_EQ(r.latency, f.config().lat_l1);
  EXPECT_EQ(f.snapshot_stats().snoops, 0u);
}

TEST(Fabric, StoreToLineSharedByThreeCores) {
  Fabric f(small_config());
  Cycle t = 0;
  for (CoreId c = 0; c < 3; ++c) t += f.core_load(c, kA, t).latency;
  for (CoreId c = 0; c < 3; ++c) ASSERT_EQ(f.state_of(c, kA), MesiState::Shared);
  const auto before = f.snapshot_stats();
  const Cycle lat = f.core_store(0, kA, filled(1), t);
  const auto after = f.snapshot_stats();
  EXPECT_EQ(after.invalidations - before.invalidations, 2u);
  EXPECT_EQ(after.upgrades_s_to_e - before.upgrades_s_to_e, 1u);
  EXPECT_GE(lat, f.config().lat_c2c);
  EXPECT_EQ(f.state_of(0, kA), MesiState::Modified);
  EXPECT_EQ(f.state_of(1, kA), MesiState::Invalid);
  EXPECT_EQ(f.state_of(2, kA), MesiState::Invalid);
}

TEST(Fabric, StoreToExclusiveIsSilent) {
  Fabric f(small_config());
  const Cycle t = f.core_load(0, kA, 0).latency;
  const auto before = f.snapshot_stats();
  EXPECT_EQ(f.core_store(0, kA, filled(2), t), f.config().lat_l1);
  EXPECT_EQ(f.snapshot_stats().invalidations, before.invalidations);
  EXPECT_EQ(f.snapshot_stats().upgrades_s_to_e, before.upgrades_s_to_e);
}

TEST(Fabric, CasSuccessAndFailure) {
  Fabric f(small_config());
  Cycle t = f.core_load(0, kA, 0).latency;
  auto ok = f.core_rmw(0, kA, 0, 0, 5, t);
  EXPECT_TRUE(ok.success);
  EXPECT_EQ(f.snapshot_stats().invalidations, 0u);
  t += ok.latency;
  t += f.core_load(1, kA, t).latency;
  auto bad = f.core_rmw(1, kA, 0, 0, 9, t);
  EXPECT_FALSE(bad.success);
  EXPECT_EQ(bad.observed, 5u);
  EXPECT_EQ(f.state_of(1, kA), MesiState::Modified);
  EXPECT_EQ(f.state_of(0, kA), MesiState::Invalid);
  EXPECT_EQ(load_word(f.peek(kA), 0), 5u);
}

TEST(Fabric, InjectionNeedsArmedResidentLine) {
  Fabric f(small_config());
  Cycle t = f.acquire_exclusive(2, kA, 0);
  EXPECT_FALSE(f.inject_line(2, kA, filled(3), t));  // not armed
  f.set_pushable(2, kA, true);
  const auto before = f.snapshot_stats();
  EXPECT_TRUE(f.inject_line(2, kA, filled(3), t));
  EXPECT_EQ(f.snapshot_stats().snoops, before.snoops);
  EXPECT_EQ(f.state_of(2, kA), MesiState::Exclusive);
  EXPECT_FALSE(f.is_pushable(2, kA));
  EXPECT_EQ(f.peek(kA), filled(3));
  // Second injection to the same line is rejected: the first consumed the arm.
  EXPECT_FALSE(f.inject_line(2, kA, filled(4), t + 1));
  EXPECT_EQ(f.peek(kA), filled(3));
}

TEST(Fabric, InjectedDataWaitsForTransit) {
  Fabric f(small_config());
  const Cycle t = f.acquire_exclusive(0, kA, 0);
  f.set_pushable(0, kA, true);
  ASSERT_TRUE(f.inject_line(0, kA, filled(1), t));
  const auto r = f.core_load(0, kA, t);
  EXPECT_EQ(r.latency, f.config().lat_l1 + f.config().vlrd_one_way());
}

TEST(Fabric, EvictedArmedLineRejectsInjection) {
  Fabric f(small_config());
  Cycle t = f.acquire_exclusive(0, kA, 0);
  f.set_pushable(0, kA, true);
  t += f.evict(0, kA, t);
  EXPECT_FALSE(f.inject_line(0, kA, filled(1), t));
  EXPECT_EQ(f.snapshot_stats().injections_rejected, 1u);
}

TEST(Fabric, RemoteReadDisarmsLine) {
  Fabric f(small_config());
  Cycle t = f.acquire_exclusive(0, kA, 0);
  f.set_pushable(0, kA, true);
  t += f.core_load(1, kA, t).latency;
  EXPECT_FALSE(f.is_pushable(0, kA));
  EXPECT_FALSE(f.inject_line(0, kA, filled(1), t));
}

TEST(Fabric, DirtyEvictionWritesBack) {
  Fabric f(small_config());
  const Cycle t = f.core_store(0, kA, filled(1), 0);
  const auto before = f.snapshot_stats().mem_transactions;
  f.evict(0, kA, t);
  EXPECT_EQ(f.snapshot_stats().mem_transactions - before, 1u);
}

TEST(Fabric, UnalignedAddressFaults) {
  Fabric f(small_config());
  EXPECT_THROW(f.core_load(0, kA + 8, 0), FabricFault);
  EXPECT_THROW(f.evict(0, kA, 0), FabricFault);
}

TEST(Fabric, TransactionsOnOneLineSerialize) {
  Fabric f(small_config());
  // Two misses issued in the same cycle: the second waits for the first.
  const Cycle a = f.core_store(0, kA, filled(1), 0);
  const Cycle b = f.core_store(1, kA, filled(2), 0);
  EXPECT_EQ(a, f.config().lat_mem);
  EXPECT_EQ(b, a + f.config().lat_c2c);
}

// Reference LRU model of one set-associative cache. Only single-core
// traffic is replayed so coherence never removes lines.
TEST(Fabric, L1ReplacementMatchesReferenceLru) {
  SimConfig c = small_config(1);
  c.l1_lines = 8;
  c.l1_assoc = 2;
  c.l2_lines = 4096;
  Fabric f(c);
  std::map<std::size_t, std::vector<Addr>> ref;  // set -> MRU-first ways
  std::mt19937_64 rng(17);
  Cycle t = 0;
  for (int i = 0; i < 4000; ++i) {
    const Addr a = (rng() % 24) * kLineBytes;
    const std::size_t set = (a / kLineBytes) % c.l1_sets();
    auto& ways = ref[set];
    const auto it = std::find(ways.begin(), ways.end(), a);
    const bool ref_hit = it != ways.end();
    if (ref_hit) ways.erase(it);
    ways.insert(ways.begin(), a);
    if (ways.size() > c.l1_assoc) ways.pop_back();
    const auto hits_before = f.snapshot_stats().l1_hits;
    if (rng() % 2 == 0) t += f.core_load(0, a, t).latency;
    else t += f.core_store(0, a, filled(static_cast<std::uint8_t>(i)), t);
    ASSERT_EQ(f.snapshot_stats().l1_hits - hits_before, ref_hit ? 1u : 0u) << "op " << i;
  }
}

// Independent tally of MESI events for caches large enough to never evict.
struct MesiOracle {
  std::map<Addr, std::map<CoreId, MesiState>> lines;
  std::set<Addr> l2;
  StatCounters s;

  void load(CoreId c, Addr a) {
    auto& holders = lines[a];
    if (holders.contains(c)) return;
    bool remote_excl = false;
    for (auto& [h, st] : holders) {
      if (st == MesiState::Modified || st == MesiState::Exclusive) {
        remote_excl = true;
        ++s.snoops;
        if (st == MesiState::Modified) ++s.mem_transactions;
        st = MesiState::Shared;
      }
    }
    if (!remote_excl && holders.empty() && !l2.contains(a)) ++s.mem_transactions;
    holders[c] = holders.empty() ? MesiState::Exclusive : MesiState::Shared;
    l2.insert(a);
  }

  void write(CoreId c, Addr a) {
    auto& holders = lines[a];
    auto mine = holders.find(c);
    if (mine != holders.end() && mine->second != MesiState::Shared) {
      mine->second = MesiState::Modified;
      return;
    }
    if (mine != holders.end()) ++s.upgrades_s_to_e;
    if (mine == holders.end() && holders.empty() && !l2.contains(a)) ++s.mem_transactions;
    for (auto it = holders.begin(); it != holders.end();) {
      if (it->first == c) {
        ++it;
        continue;
      }
      ++s.invalidations;
      ++s.snoops;
      it = holders.erase(it);
    }
    holders[c] = MesiState::Modified;
    l2.insert(a);
  }
};

TEST(Fabric, RandomScriptCountersMatchOracle) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Fabric f(small_config(6));
    MesiOracle o;
    std::mt19937_64 rng(seed);
    Cycle t = 0;
    for (int i = 0; i < 1500; ++i) {
      const auto c = static_cast<CoreId>(rng() % 6);
      const Addr a = kA + (rng() % 8) * kLineBytes;
      switch (rng() % 3) {
        case 0:
          t += f.core_load(c, a, t).latency;
          o.load(c, a);
          break;
        case 1:
          t += f.core_store(c, a, filled(static_cast<std::uint8_t>(i)), t);
          o.write(c, a);
          break;
        default:
          t += f.core_rmw(c, a, 1, rng() % 2, 1, t).latency;
          o.write(c, a);
          break;
      }
      ASSERT_FALSE(f.check_invariants().has_value()) << *f.check_invariants();
    }
    const auto s = f.snapshot_stats();
    EXPECT_EQ(s.snoops, o.s.snoops) << "seed " << seed;
    EXPECT_EQ(s.invalidations, o.s.invalidations) << "seed " << seed;
    EXPECT_EQ(s.upgrades_s_to_e, o.s.upgrades_s_to_e) << "seed " << seed;
    EXPECT_EQ(s.mem_transactions, o.s.mem_transactions) << "seed " << seed;
  }
}

TEST(Fabric, AddressRecordsAttributeTraffic) {
  Fabric f(small_config());
  Cycle t = f.core_store(0, kA, filled(1), 0);
  t += f.core_store(1, kA, filled(2), t);
  t += f.core_load(2, kA + kLineBytes, t).latency;
  const auto& r = f.address_records();
  EXPECT_EQ(r.at(kA).touched_by, 0b11u);
  EXPECT_EQ(r.at(kA).invalidations, 1u);
  EXPECT_EQ(r.at(kA + kLineBytes).touched_by, 0b100u);
  EXPECT_EQ(r.at(kA + kLineBytes).invalidations, 0u);
}

TEST(AddressSpace, PrivateArenasArePageDisjoint) {
  AddressSpace as;
  const Addr a = as.alloc_private(0, 100);
  const Addr b = as.alloc_private(1, 100);
  const Addr c = as.alloc_private(0, 100);
  EXPECT_EQ(a % AddressSpace::kPageBytes, 0u);
  EXPECT_NE(a / AddressSpace::kPageBytes, b / AddressSpace::kPageBytes);
  EXPECT_EQ(c, a + AddressSpace::kPageBytes);
  const Addr s1 = as.alloc_shared(8);
  const Addr s2 = as.alloc_shared(8);
  EXPECT_EQ(s2 - s1, kLineBytes);
}

}  // namespace
