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

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vl/fabric/types.hpp"

namespace vl::fabric {
class Fabric;
}

namespace vl::vlrd {

/// Buffer index. Slots are numbered from 1; 0 is the NULL link.
using Slot = std::uint16_t;
inline constexpr Slot kNull = 0;
inline constexpr std::uint32_t kLinkTabRows = 256;
inline constexpr std::uint32_t kMaxEntries = 65535;

class VlrdFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct VlrdConfig {
  std::uint32_t num_sqi = kLinkTabRows;
  std::uint32_t buf_entries = 256;
  /// Most prodBuf entries one SQI may hold; 0 means no per-SQI limit.
  std::uint32_t sqi_prod_quota = 0;
  bool operator==(const VlrdConfig&) const = default;
};

struct LinkRow {
  Slot prodHead = kNull, prodTail = kNull;
  Slot consHead = kNull, consTail = kNull;
  bool operator==(const LinkRow&) const = default;
};

struct ConsBufEntry {
  bool valid = false;
  std::uint32_t sqi = 0;
  Addr consTgt = 0;
  CoreId core = 0;  // owner of consTgt
  Slot nextL = kNull;
  Slot nextIn = kNull;
  Cycle accepted_at = 0;
};

struct ProdBufEntry {
  // IN
  bool valid = false;
  std::uint32_t sqi = 0;
  Line data{};
  Slot nextIn = kNull;
  Cycle accepted_at = 0;
  std::uint64_t ack_seq = 0;  // device-wide ACK order
  // LINK
  Slot nextL = kNull;
  // OUT
  bool outValid = false;
  Addr consTgt = 0;
  CoreId core = 0;
  Slot mapped = kNull;
  Slot nextOut = kNull;
  Cycle mapped_at = 0;
};

struct Registers {
  Slot CIFR = 1, CIHR = kNull, CITR = kNull;
  Slot PIFR = 1, PIHR = kNull, PITR = kNull;
  Slot POHR = kNull, POTR = kNull;
};

enum class Status : std::uint8_t { Ack, Nack };

struct AcceptResult {
  Status status = Status::Nack;
  Cycle accepted_at = 0;  // port serialization may push this past the arrival cycle
  Slot slot = kNull;
};

struct TraceRecord {
  Cycle cycle = 0;
  std::string stage1, stage2, stage3, emit;  // empty = idle
  bool idle() const { return stage1.empty() && stage2.empty() && stage3.empty() && emit.empty(); }
};

/// Renders one record as trace lines: "<cycle> S1 ...", idle stages as "-".
std::string format_trace(const TraceRecord& r);

struct Delivery {
  Cycle cycle = 0;
  std::uint32_t sqi = 0;
  CoreId core = 0;
  Addr consTgt = 0;
  std::uint64_t ack_seq = 0;
  bool accepted = false;
};

struct DeviceStats {
  std::uint64_t prod_acks = 0, prod_nacks = 0;
  std::uint64_t cons_acks = 0, cons_nacks = 0;
  std::uint64_t mapped = 0;
  std::uint64_t injections_accepted = 0, injections_rejected = 0;
  std::uint32_t max_prod_occupancy = 0, max_cons_occupancy = 0;
  std::uint64_t ticks = 0;
};

/// Storage widths in bits for one configuration.
struct BitWidths {
  unsigned pointer = 0;
  unsigned link_row = 0;
  unsigned cons_entry = 0;
  unsigned prod_entry = 0;
  static constexpr unsigned kTargetBits = 52;  // line-granular physical address
};
BitWidths compute_bit_widths(std::uint32_t buf_entries);

/// Routing device: two shared buffers managed as linked lists, a per-SQI
/// link table, and a three-stage mapping pipeline. The device is advanced
/// explicitly; `advance_to` ticks every cycle up to the given one.
class Vlrd {
 public:
  /// Directed placement of a line into a core's cache; returns acceptance.
  using Injector = std::function<bool(CoreId, Addr, const Line&, Cycle)>;

  explicit Vlrd(VlrdConfig config);
  Vlrd(VlrdConfig config, fabric::Fabric& fabric);

  /// Without an injector mapped entries stay in the OUT list.
  void set_injector(Injector inj) { injector_ = std::move(inj); }

  const VlrdConfig& config() const noexcept { return config_; }
  Cycle cycle() const noexcept { return cycle_; }

  AcceptResult accept_producer_packet(std::uint32_t sqi, const Line& data, Cycle now);
  AcceptResult accept_consumer_request(std::uint32_t sqi, Addr consTgt, CoreId core, Cycle now);

  /// Advances one cycle: stage 3 commits, stage 2 decides, stage 1 reads,
  /// then at most one mapped entry is emitted.
  TraceRecord pipeline_tick();
  void advance_to(Cycle t);

  void set_trace_sink(std::function<void(const TraceRecord&)> sink) { trace_sink_ = std::move(sink); }
  void set_delivery_hook(std::function<void(const Delivery&, const Line&)> hook) { delivery_hook_ = std::move(hook); }

  const Registers& registers() const noexcept { return regs_; }
  const LinkRow& link_row(std::uint32_t sqi) const { return link_.at(sqi); }
  const ConsBufEntry& cons_entry(Slot s) const { return cons_.at(s); }
  const ProdBufEntry& prod_entry(Slot s) const { return prod_.at(s); }
  std::uint32_t prod_occupancy() const noexcept { return prod_used_; }
  std::uint32_t prod_occupancy(std::uint32_t sqi) const { return prod_per_sqi_.at(sqi); }
  /// Applies to later pushes only; entries already held are kept.
  void set_sqi_prod_quota(std::uint32_t quota) noexcept { config_.sqi_prod_quota = quota; }
  std::uint32_t cons_occupancy() const noexcept { return cons_used_; }
  const DeviceStats& stats() const noexcept { return stats_; }

  /// True when nothing is buffered, in flight, or waiting to be sent.
  bool quiescent() const noexcept;

  /// Walks every list and checks slot reachability; returns the first problem.
  std::optional<std::string> check_lists() const;

 private:
  enum class Kind : std::uint8_t { Consumer, Producer };
  struct Latch {
    bool valid = false;
    Kind kind = Kind::Consumer;
    Slot slot = kNull;
    std::uint32_t sqi = 0;
    bool hit = false;
  };

  void check_sqi(std::uint32_t sqi) const;
  Slot next_free(const std::vector<bool>& used_flags, Slot from) const;

  // linkTab fields, for forwarding bookkeeping between stages.
  enum Field : unsigned { kProdHead = 1, kProdTail = 2, kConsHead = 4, kConsTail = 8 };
  struct Stage3Write {
    bool any = false;
    std::uint32_t row = 0;
    unsigned fields = 0;
    bool by_pop = false;
  };

  std::string stage3(const Latch& l, Stage3Write& w);
  std::string stage2(Latch& l);
  std::string stage1(Kind kind, const Stage3Write& w, Latch& out, std::string& s3_note);
  std::string emit();

  void free_cons(Slot s);
  void free_prod(Slot s);
  std::string map_entry(Slot p, Addr tgt, CoreId core, Slot mapped_from);
  void unlink_out(Slot p);

  VlrdConfig config_;
  Injector injector_;
  Cycle cycle_ = 0;
  std::vector<LinkRow> link_;
  std::vector<ConsBufEntry> cons_;  // index 0 unused
  std::vector<ProdBufEntry> prod_;  // index 0 unused
  std::vector<bool> cons_used_flag_, prod_used_flag_;
  std::uint32_t cons_used_ = 0, prod_used_ = 0;
  std::vector<std::uint32_t> prod_per_sqi_;
  Registers regs_;
  Latch s1_, s2_;
  Kind last_served_ = Kind::Producer;
  Cycle prod_port_last_ = 0, cons_port_last_ = 0;
  bool prod_port_used_ = false, cons_port_used_ = false;
  std::uint64_t ack_seq_ = 0;
  DeviceStats stats_;
  std::function<void(const TraceRecord&)> trace_sink_;
  std::function<void(const Delivery&, const Line&)> delivery_hook_;
};

}  // namespace vl::vlrd

namespace vl::vlrd {

/// Replays the reference five-cycle mapping scenario (consumer requests on
/// SQI 1 and 0, then producer data on SQI 1, 2, 1) and returns its trace.
std::string reference_scenario_trace();

}  // namespace vl::vlrd
