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

#include <algorithm>
#include <functional>
#include <list>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vl/fabric/config.hpp"
#include "vl/fabric/stats.hpp"
#include "vl/fabric/types.hpp"

namespace vl::fabric {

/// Violated operation precondition (unaligned address, non-resident evict...).
class FabricFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Tag-array view of one private-cache line.
struct CacheLineState {
  Addr addr = 0;
  MesiState state = MesiState::Invalid;
  bool dirty = false;
  bool selected = false;
  bool pushable = false;
  std::uint64_t lru = 0;
  Cycle ready_at = 0;  // injected data lands at this cycle
};

struct LoadResult {
  Line value{};
  Cycle latency = 0;
};

struct RmwResult {
  bool success = false;
  std::uint64_t observed = 0;
  Cycle latency = 0;
};

/// Per-address attribution used to show which lines carry coherence traffic.
struct AddressRecord {
  std::uint64_t touched_by = 0;  // bitmask of cores that issued ops on the line
  std::uint64_t invalidations = 0;
  std::uint64_t upgrades = 0;
  std::uint64_t snoops = 0;
};

/// Transaction-level MESI model: private set-associative L1s with LRU, an
/// inclusive shared L2 (capacity/LRU only), flat memory, and a directory
/// that serializes transactions per line. Every operation takes effect at
/// its issue cycle and reports the latency the issuing core observes.
///
/// Line data is held once per address: under MESI all valid copies agree,
/// so the coherent value is the only one worth storing.
class Fabric {
 public:
  explicit Fabric(SimConfig config);

  const SimConfig& config() const noexcept { return config_; }

  /// Called with the issue cycle before every core operation, so attached
  /// devices can catch up with the timeline.
  void set_sync_hook(std::function<void(Cycle)> hook) { sync_hook_ = std::move(hook); }
  void set_trace(std::ostream* out) { trace_ = out; }

  LoadResult core_load(CoreId core, Addr addr, Cycle now);
  Cycle core_store(CoreId core, Addr addr, const Line& value, Cycle now);
  Cycle core_store_bytes(CoreId core, Addr addr, std::size_t offset, std::span<const std::uint8_t> bytes,
                         Cycle now);
  /// Word CAS; the line is acquired in M whether or not the compare succeeds.
  RmwResult core_rmw(CoreId core, Addr addr, std::size_t word, std::uint64_t expected, std::uint64_t desired,
                     Cycle now);
  /// Brings the line into L1 with write permission without modifying it
  /// (E if it was clean). Used by vl_select.
  Cycle acquire_exclusive(CoreId core, Addr addr, Cycle now);

  /// Directed, non-snooping line placement. Accepted only if the target line
  /// is resident, exclusively held, and armed (pushable).
  bool inject_line(CoreId target, Addr addr, const Line& data, Cycle now);

  Cycle evict(CoreId core, Addr addr, Cycle now);

  /// Device-side completion of a push: the line's data becomes zero and, if
  /// still resident on `core`, it is left Exclusive and dirty. No traffic.
  void zero_owned(CoreId core, Addr addr, Cycle now);

  /// Private tag-bit access; no coherence traffic.
  const CacheLineState* probe(CoreId core, Addr addr) const;
  MesiState state_of(CoreId core, Addr addr) const;
  void set_selected(CoreId core, Addr addr, bool on);
  void set_pushable(CoreId core, Addr addr, bool on);
  bool is_pushable(CoreId core, Addr addr) const;
  void clear_pushable_all(CoreId core);
  void clear_selected_all(CoreId core);

  /// Backdoor memory access for initialization and checks; no stats, no timing.
  const Line& peek(Addr addr) const;
  void poke(Addr addr, const Line& value);

  StatCounters snapshot_stats() const { return stats_; }
  void note_op_latency(OpKind kind, Cycle latency) { stats_.latency(kind).add(latency); }
  void note_cycle(Cycle c) { stats_.cycles = std::max<std::uint64_t>(stats_.cycles, c); }

  const std::unordered_map<Addr, AddressRecord>& address_records() const noexcept { return records_; }

  /// Scans every cache. Returns a description of the first MESI violation.
  std::optional<std::string> check_invariants() const;

  void trace(Cycle cycle, std::string_view kind, CoreId core, Addr addr, std::string_view detail);

 private:
  struct DirEntry {
    std::uint64_t sharers = 0;  // cores holding any valid copy
    int owner = -1;             // holder in M/E, if any
    Cycle busy_until = 0;
    // Cores whose S copy was killed by a write still in flight until
    // racing_until; a write request from one of them raced that write.
    std::uint64_t racing = 0;
    Cycle racing_until = 0;
  };

  void sync(Cycle now);
  void check_core(CoreId core) const;
  static void check_aligned(Addr addr);

  CacheLineState* find(CoreId core, Addr addr);
  const CacheLineState* find(CoreId core, Addr addr) const;
  CacheLineState& install(CoreId core, Addr addr, MesiState state, Cycle now);
  void drop_line(CoreId core, CacheLineState& line, bool writeback_if_dirty);
  bool touch_l2(Addr addr);
  void touch_lru(CacheLineState& line) { line.lru = ++lru_clock_; }
  AddressRecord& record(Addr addr) { return records_[addr]; }

  /// Kills every remote copy; returns how many were invalidated and adds
  /// the cores that held it Shared to `shared_mask`.
  unsigned invalidate_others(CoreId keeper, Addr addr, DirEntry& dir, std::uint64_t* shared_mask = nullptr);
  void open_race_window(DirEntry& dir, std::uint64_t killed_shared, Cycle now, Cycle until);
  void count_upgrade(CoreId core, Addr addr, std::string_view kind, Cycle now, std::string_view detail);
  /// Write-permission acquisition shared by store, rmw and select.
  Cycle acquire_write(CoreId core, Addr addr, Cycle now, bool make_dirty, OpKind kind);

  SimConfig config_;
  std::vector<CacheLineState> l1_;  // num_cores * sets * assoc
  std::unordered_map<Addr, DirEntry> dir_;
  std::list<Addr> l2_lru_;
  std::unordered_map<Addr, std::list<Addr>::iterator> l2_index_;
  std::unordered_map<Addr, Line> data_;
  std::unordered_map<Addr, AddressRecord> records_;
  StatCounters stats_;
  std::uint64_t lru_clock_ = 0;
  std::function<void(Cycle)> sync_hook_;
  std::ostream* trace_ = nullptr;
};

/// Bump allocator over the cacheable range. Each core gets its own arena so
/// private buffers of different cores never share a page.
class AddressSpace {
 public:
  static constexpr Addr kSharedBase = Addr{1} << 20;
  static constexpr Addr kArenaBase = Addr{1} << 32;
  static constexpr Addr kArenaSize = Addr{1} << 28;
  static constexpr std::size_t kPageBytes = 4096;

  /// Shared region (queue metadata, slots).
  Addr alloc_shared(std::size_t bytes, std::size_t align = kLineBytes);
  /// Page-aligned private allocation in `core`'s arena.
  Addr alloc_private(CoreId core, std::size_t bytes);

 private:
  Addr shared_next_ = kSharedBase;
  std::unordered_map<CoreId, Addr> arena_next_;
};

}  // namespace vl::fabric
