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

#include "vl/fabric/fabric.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

namespace vl::fabric {

void LatencyHistogram::add(Cycle latency) noexcept {
  const std::size_t bucket =
      latency == 0 ? 0 : std::min<std::size_t>(kBuckets - 1, static_cast<std::size_t>(std::bit_width(latency) - 1));
  ++buckets[bucket];
  ++count;
  sum += latency;
  max = std::max(max, latency);
}

namespace {

constexpr std::uint64_t bit(CoreId c) { return std::uint64_t{1} << c; }

const Line kZeroLine{};

}  // namespace

Fabric::Fabric(SimConfig config) : config_(config) {
  config_.validate();
  l1_.resize(static_cast<std::size_t>(config_.num_cores) * config_.l1_lines);
}

void Fabric::sync(Cycle now) {
  if (sync_hook_) sync_hook_(now);
  note_cycle(now);
}

void Fabric::check_core(CoreId core) const {
  if (core >= config_.num_cores) throw FabricFault("core id " + std::to_string(core) + " out of range");
}

void Fabric::check_aligned(Addr addr) {
  if (!is_line_aligned(addr)) {
    std::ostringstream os;
    os << "address 0x" << std::hex << addr << " is not 64 B aligned";
    throw FabricFault(os.str());
  }
}

CacheLineState* Fabric::find(CoreId core, Addr addr) {
  const std::size_t sets = config_.l1_sets();
  const std::size_t set = (addr / kLineBytes) % sets;
  const std::size_t base = (static_cast<std::size_t>(core) * sets + set) * config_.l1_assoc;
  for (std::size_t w = 0; w < config_.l1_assoc; ++w) {
    auto& l = l1_[base + w];
    if (l.state != MesiState::Invalid && l.addr == addr) return &l;
  }
  return nullptr;
}

const CacheLineState* Fabric::find(CoreId core, Addr addr) const {
  return const_cast<Fabric*>(this)->find(core, addr);
}

void Fabric::drop_line(CoreId core, CacheLineState& line, bool writeback_if_dirty) {
  if (writeback_if_dirty && line.dirty) {
    ++stats_.mem_transactions;
    ++stats_.writebacks;
  }
  auto it = dir_.find(line.addr);
  if (it != dir_.end()) {
    it->second.sharers &= ~bit(core);
    if (it->second.owner == static_cast<int>(core)) it->second.owner = -1;
  }
  line = CacheLineState{};
}

CacheLineState& Fabric::install(CoreId core, Addr addr, MesiState state, Cycle now) {
  const std::size_t sets = config_.l1_sets();
  const std::size_t set = (addr / kLineBytes) % sets;
  const std::size_t base = (static_cast<std::size_t>(core) * sets + set) * config_.l1_assoc;
  CacheLineState* slot = nullptr;
  for (std::size_t w = 0; w < config_.l1_assoc; ++w) {
    auto& l = l1_[base + w];
    if (l.state == MesiState::Invalid) {
      slot = &l;
      break;
    }
    if (slot == nullptr || l.lru < slot->lru) slot = &l;
  }
  if (slot->state != MesiState::Invalid) {
    trace(now, "evict", core, slot->addr, slot->dirty ? "lru dirty" : "lru clean");
    drop_line(core, *slot, true);
  }
  slot->addr = addr;
  slot->state = state;
  slot->dirty = false;
  slot->selected = false;
  slot->pushable = false;
  slot->ready_at = 0;
  touch_lru(*slot);
  return *slot;
}

bool Fabric::touch_l2(Addr addr) {
  if (auto it = l2_index_.find(addr); it != l2_index_.end()) {
    l2_lru_.splice(l2_lru_.begin(), l2_lru_, it->second);
    return true;
  }
  l2_lru_.push_front(addr);
  l2_index_[addr] = l2_lru_.begin();
  if (l2_lru_.size() > config_.l2_lines) {
    const Addr victim = l2_lru_.back();
    l2_lru_.pop_back();
    l2_index_.erase(victim);
    // Inclusive: back-invalidate private copies.
    if (auto d = dir_.find(victim); d != dir_.end()) {
      const std::uint64_t holders = d->second.sharers;
      for (CoreId c = 0; c < config_.num_cores; ++c) {
        if ((holders & bit(c)) == 0) continue;
        if (auto* l = find(c, victim)) drop_line(c, *l, true);
      }
    }
  }
  return false;
}

unsigned Fabric::invalidate_others(CoreId keeper, Addr addr, DirEntry& dir, std::uint64_t* shared_mask) {
  unsigned killed = 0;
  auto& rec = record(addr);
  for (CoreId c = 0; c < config_.num_cores; ++c) {
    if (c == keeper || (dir.sharers & bit(c)) == 0) continue;
    if (auto* l = find(c, addr)) {
      if (shared_mask != nullptr && l->state == MesiState::Shared) *shared_mask |= bit(c);
      // Dirty data moves to the requester with ownership; no writeback.
      *l = CacheLineState{};
    }
    dir.sharers &= ~bit(c);
    if (dir.owner == static_cast<int>(c)) dir.owner = -1;
    ++killed;
  }
  stats_.invalidations += killed;
  stats_.snoops += killed;
  rec.invalidations += killed;
  rec.snoops += killed;
  return killed;
}

LoadResult Fabric::core_load(CoreId core, Addr addr, Cycle now) {
  check_core(core);
  check_aligned(addr);
  sync(now);
  record(addr).touched_by |= bit(core);

  LoadResult r;
  if (auto* l = find(core, addr)) {
    ++stats_.l1_hits;
    touch_lru(*l);
    r.latency = config_.lat_l1 + (l->ready_at > now ? l->ready_at - now : 0);
    r.value = peek(addr);
    note_op_latency(OpKind::Load, r.latency);
    note_cycle(now + r.latency);
    trace(now, "load", core, addr, "hit");
    return r;
  }

  ++stats_.l1_misses;
  Cycle start = std::max(now, dir_[addr].busy_until);
  Cycle lat = 0;
  MesiState fill_state = MesiState::Shared;
  const char* how = "";
  {
    auto& d = dir_[addr];
    if (d.owner >= 0) {
      const auto owner = static_cast<CoreId>(d.owner);
      auto* o = find(owner, addr);
      ++stats_.snoops;
      ++record(addr).snoops;
      if (o != nullptr) {
        start = std::max(start, o->ready_at);
        if (o->dirty) {
          ++stats_.mem_transactions;
          ++stats_.writebacks;
          o->dirty = false;
        }
        o->state = MesiState::Shared;
        o->selected = false;
        o->pushable = false;
      }
      d.owner = -1;
      lat = config_.lat_c2c;
      touch_l2(addr);
      how = "c2c";
    } else if (d.sharers != 0) {
      touch_l2(addr);
      lat = config_.lat_l2;
      how = "l2-shared";
    } else {
      const bool hit = touch_l2(addr);
      lat = hit ? config_.lat_l2 : config_.lat_mem;
      if (!hit) {
        ++stats_.mem_transactions;
        ++stats_.mem_fills;
      }
      fill_state = MesiState::Exclusive;
      how = hit ? "l2" : "mem";
    }
  }
  install(core, addr, fill_state, now);
  auto& d = dir_[addr];
  d.sharers |= bit(core);
  if (fill_state == MesiState::Exclusive) d.owner = static_cast<int>(core);
  // Reads of a line already Shared need no transient directory state.
  if (how != std::string_view("l2-shared")) d.busy_until = start + lat;

  r.latency = (start - now) + lat;
  r.value = peek(addr);
  note_op_latency(OpKind::Load, r.latency);
  note_cycle(now + r.latency);
  trace(now, "load", core, addr, how);
  return r;
}

void Fabric::open_race_window(DirEntry& dir, std::uint64_t killed_shared, Cycle now, Cycle until) {
  if (dir.racing_until <= now) dir.racing = 0;
  dir.racing |= killed_shared;
  dir.racing_until = std::max(dir.racing_until, until);
}

void Fabric::count_upgrade(CoreId core, Addr addr, std::string_view kind, Cycle now, std::string_view detail) {
  ++stats_.upgrades_s_to_e;
  ++record(addr).upgrades;
  trace(now, kind, core, addr, detail);
}

Cycle Fabric::acquire_write(CoreId core, Addr addr, Cycle now, bool make_dirty, OpKind kind) {
  check_core(core);
  check_aligned(addr);
  sync(now);
  record(addr).touched_by |= bit(core);
  const std::string_view kname = to_string(kind);

  auto* l = find(core, addr);
  if (l != nullptr && (l->state == MesiState::Modified || l->state == MesiState::Exclusive)) {
    ++stats_.l1_hits;
    touch_lru(*l);
    if (make_dirty) {
      l->state = MesiState::Modified;
      l->dirty = true;
    }
    const Cycle lat = config_.lat_l1 + (l->ready_at > now ? l->ready_at - now : 0);
    note_cycle(now + lat);
    trace(now, kname, core, addr, "hit");
    return lat;
  }

  Cycle start = std::max(now, dir_[addr].busy_until);
  Cycle lat = 0;
  if (l != nullptr) {
    // Shared on the writer: upgrade.
    ++stats_.upgrades_s_to_e;
    ++record(addr).upgrades;
    auto& d = dir_[addr];
    std::uint64_t killed = 0;
    const unsigned k = invalidate_others(core, addr, d, &killed);
    lat = k > 0 ? config_.lat_c2c + (k - 1) * config_.lat_l1 : config_.lat_l2;
    open_race_window(d, killed, now, start + lat);
    touch_lru(*l);
    l->state = make_dirty ? MesiState::Modified : MesiState::Exclusive;
    l->dirty = l->dirty || make_dirty;
    d.owner = static_cast<int>(core);
    d.sharers = bit(core);
    d.busy_until = start + lat;
    note_cycle(start + lat);
    trace(now, kname, core, addr, "upgrade inv=" + std::to_string(k));
    return (start - now) + lat;
  }

  ++stats_.l1_misses;
  bool carried_dirty = false;
  const char* how = "";
  {
    auto& d = dir_[addr];
    if ((d.racing & bit(core)) != 0 && now < d.racing_until) {
      // Our upgrade request left before the invalidation reached us.
      d.racing &= ~bit(core);
      count_upgrade(core, addr, kname, now, "upgrade-race");
    }
    if (d.owner >= 0) {
      const auto owner = static_cast<CoreId>(d.owner);
      if (const auto* o = find(owner, addr)) {
        carried_dirty = o->dirty;
        start = std::max(start, o->ready_at);
      }
      invalidate_others(core, addr, d);
      touch_l2(addr);
      lat = config_.lat_c2c;
      how = "c2c";
    } else if (d.sharers != 0) {
      std::uint64_t killed = 0;
      const unsigned k = invalidate_others(core, addr, d, &killed);
      touch_l2(addr);
      lat = std::max(config_.lat_l2, config_.lat_c2c + (k - 1) * config_.lat_l1);
      open_race_window(d, killed, now, start + lat);
      how = "l2-inv";
    } else {
      const bool hit = touch_l2(addr);
      lat = hit ? config_.lat_l2 : config_.lat_mem;
      if (!hit) {
        ++stats_.mem_transactions;
        ++stats_.mem_fills;
      }
      how = hit ? "l2" : "mem";
    }
  }
  const bool dirty = make_dirty || carried_dirty;
  auto& nl = install(core, addr, make_dirty ? MesiState::Modified : MesiState::Exclusive, now);
  nl.dirty = dirty;
  auto& d = dir_[addr];
  d.sharers = bit(core);
  d.owner = static_cast<int>(core);
  d.busy_until = start + lat;
  note_cycle(start + lat);
  trace(now, kname, core, addr, how);
  return (start - now) + lat;
}

Cycle Fabric::core_store(CoreId core, Addr addr, const Line& value, Cycle now) {
  const Cycle lat = acquire_write(core, addr, now, true, OpKind::Store);
  data_[addr] = value;
  note_op_latency(OpKind::Store, lat);
  return lat;
}

Cycle Fabric::core_store_bytes(CoreId core, Addr addr, std::size_t offset, std::span<const std::uint8_t> bytes,
                               Cycle now) {
  if (offset + bytes.size() > kLineBytes) throw FabricFault("store crosses a line boundary");
  const Cycle lat = acquire_write(core, addr, now, true, OpKind::Store);
  auto& line = data_[addr];
  std::copy(bytes.begin(), bytes.end(), line.begin() + static_cast<std::ptrdiff_t>(offset));
  note_op_latency(OpKind::Store, lat);
  return lat;
}

RmwResult Fabric::core_rmw(CoreId core, Addr addr, std::size_t word, std::uint64_t expected,
                           std::uint64_t desired, Cycle now) {
  if (word >= kWordsPerLine) throw FabricFault("rmw word offset out of range");
  RmwResult r;
  r.latency = acquire_write(core, addr, now, true, OpKind::Rmw);
  auto& line = data_[addr];
  r.observed = load_word(line, word);
  r.success = r.observed == expected;
  if (r.success) store_word(line, word, desired);
  note_op_latency(OpKind::Rmw, r.latency);
  return r;
}

Cycle Fabric::acquire_exclusive(CoreId core, Addr addr, Cycle now) {
  const Cycle lat = acquire_write(core, addr, now, false, OpKind::Select);
  note_op_latency(OpKind::Select, lat);
  return lat;
}

bool Fabric::inject_line(CoreId target, Addr addr, const Line& data, Cycle now) {
  check_core(target);
  check_aligned(addr);
  auto* l = find(target, addr);
  const bool ok = l != nullptr && l->pushable &&
                  (l->state == MesiState::Exclusive || l->state == MesiState::Modified);
  if (!ok) {
    ++stats_.injections_rejected;
    trace(now, "inject", target, addr, "rejected");
    return false;
  }
  data_[addr] = data;
  l->state = MesiState::Exclusive;
  l->dirty = true;
  l->pushable = false;
  l->selected = false;
  l->ready_at = now + config_.vlrd_one_way();
  auto& d = dir_[addr];
  d.busy_until = std::max(d.busy_until, l->ready_at);
  ++stats_.injections_accepted;
  note_cycle(l->ready_at);
  trace(now, "inject", target, addr, "accepted");
  return true;
}

Cycle Fabric::evict(CoreId core, Addr addr, Cycle now) {
  check_core(core);
  check_aligned(addr);
  sync(now);
  auto* l = find(core, addr);
  if (l == nullptr) throw FabricFault("evict of a non-resident line");
  trace(now, "evict", core, addr, l->dirty ? "dirty" : "clean");
  drop_line(core, *l, true);
  note_op_latency(OpKind::Evict, config_.lat_l1);
  return config_.lat_l1;
}

void Fabric::zero_owned(CoreId core, Addr addr, Cycle now) {
  check_core(core);
  check_aligned(addr);
  data_[addr] = Line{};
  if (auto* l = find(core, addr); l != nullptr && l->state != MesiState::Shared) {
    l->state = MesiState::Exclusive;
    l->dirty = true;
  }
  trace(now, "zero", core, addr, "push ack");
}

const CacheLineState* Fabric::probe(CoreId core, Addr addr) const {
  check_core(core);
  return find(core, addr);
}

MesiState Fabric::state_of(CoreId core, Addr addr) const {
  const auto* l = probe(core, addr);
  return l == nullptr ? MesiState::Invalid : l->state;
}

void Fabric::set_selected(CoreId core, Addr addr, bool on) {
  check_core(core);
  if (auto* l = find(core, addr)) l->selected = on;
}

void Fabric::set_pushable(CoreId core, Addr addr, bool on) {
  check_core(core);
  if (auto* l = find(core, addr)) l->pushable = on;
}

bool Fabric::is_pushable(CoreId core, Addr addr) const {
  const auto* l = probe(core, addr);
  return l != nullptr && l->pushable;
}

void Fabric::clear_pushable_all(CoreId core) {
  check_core(core);
  const std::size_t per_core = config_.l1_lines;
  for (std::size_t i = 0; i < per_core; ++i) l1_[core * per_core + i].pushable = false;
}

void Fabric::clear_selected_all(CoreId core) {
  check_core(core);
  const std::size_t per_core = config_.l1_lines;
  for (std::size_t i = 0; i < per_core; ++i) l1_[core * per_core + i].selected = false;
}

const Line& Fabric::peek(Addr addr) const {
  auto it = data_.find(addr);
  return it == data_.end() ? kZeroLine : it->second;
}

void Fabric::poke(Addr addr, const Line& value) {
  check_aligned(addr);
  data_[addr] = value;
}

std::optional<std::string> Fabric::check_invariants() const {
  struct Holders {
    std::uint64_t any = 0;
    int exclusive = -1;
    unsigned exclusive_count = 0;
  };
  std::map<Addr, Holders> seen;
  for (CoreId c = 0; c < config_.num_cores; ++c) {
    for (std::size_t i = 0; i < config_.l1_lines; ++i) {
      const auto& l = l1_[c * config_.l1_lines + i];
      if (l.state == MesiState::Invalid) continue;
      auto& h = seen[l.addr];
      h.any |= bit(c);
      const bool excl = l.state == MesiState::Modified || l.state == MesiState::Exclusive;
      if (excl) {
        h.exclusive = static_cast<int>(c);
        ++h.exclusive_count;
      }
      if ((l.selected || l.pushable) && !excl) {
        return "core " + std::to_string(c) + " has selected/pushable on a non-exclusive line";
      }
    }
  }
  for (const auto& [addr, h] : seen) {
    std::ostringstream where;
    where << "line 0x" << std::hex << addr << ": ";
    if (h.exclusive_count > 1) return where.str() + "more than one M/E holder";
    if (h.exclusive_count == 1 && std::popcount(h.any) != 1) return where.str() + "M/E coexists with sharers";
    auto d = dir_.find(addr);
    if (d == dir_.end() || d->second.sharers != h.any) return where.str() + "directory sharer mask mismatch";
    if (d->second.owner != h.exclusive) return where.str() + "directory owner mismatch";
  }
  for (const auto& [addr, d] : dir_) {
    if (d.sharers != 0 && !seen.contains(addr)) return "directory lists sharers for an uncached line";
  }
  return std::nullopt;
}

void Fabric::trace(Cycle cycle, std::string_view kind, CoreId core, Addr addr, std::string_view detail) {
  if (trace_ == nullptr) return;
  *trace_ << cycle << ' ' << kind << ' ' << core << " 0x" << std::hex << addr << std::dec << ' ' << detail << '\n';
}

Addr AddressSpace::alloc_shared(std::size_t bytes, std::size_t align) {
  const Addr a = (shared_next_ + align - 1) / align * align;
  shared_next_ = a + (bytes + kLineBytes - 1) / kLineBytes * kLineBytes;
  if (shared_next_ >= kArenaBase) throw FabricFault("shared region exhausted");
  return a;
}

Addr AddressSpace::alloc_private(CoreId core, std::size_t bytes) {
  auto [it, fresh] = arena_next_.try_emplace(core, kArenaBase + static_cast<Addr>(core) * kArenaSize);
  const Addr a = it->second;
  it->second += (bytes + kPageBytes - 1) / kPageBytes * kPageBytes;
  if (it->second > kArenaBase + (static_cast<Addr>(core) + 1) * kArenaSize) {
    throw FabricFault("private arena exhausted for core " + std::to_string(core));
  }
  return a;
}

}  // namespace vl::fabric
