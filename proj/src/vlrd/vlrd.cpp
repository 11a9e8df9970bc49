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

#include "vl/vlrd/vlrd.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "vl/fabric/fabric.hpp"

namespace vl::vlrd {

namespace {

constexpr std::string_view kNote = "{NOTE}";

std::string sl(Slot s) { return s == kNull ? "NULL" : std::to_string(s); }

std::string hex(Addr a) {
  std::ostringstream os;
  os << "0x" << std::hex << a;
  return os.str();
}

}  // namespace

BitWidths compute_bit_widths(std::uint32_t buf_entries) {
  BitWidths w;
  w.pointer = std::max(1u, static_cast<unsigned>(std::bit_width(std::max(1u, buf_entries) - 1)));
  w.link_row = 4 * w.pointer;                               // prod/cons head and tail
  w.cons_entry = BitWidths::kTargetBits + 2 * w.pointer + 1;  // consTgt, nextL, nextIn, valid
  // data, nextIn/nextL/nextOut, valid + outValid, consTgt
  w.prod_entry = 512 + 3 * w.pointer + 2 + BitWidths::kTargetBits;
  return w;
}

std::string format_trace(const TraceRecord& r) {
  std::ostringstream os;
  const std::string* stages[] = {&r.stage1, &r.stage2, &r.stage3};
  for (int k = 0; k < 3; ++k) {
    os << r.cycle << " S" << (k + 1) << ' ' << (stages[k]->empty() ? "-" : *stages[k]) << '\n';
  }
  if (!r.emit.empty()) os << r.cycle << " OUT " << r.emit << '\n';
  return os.str();
}

Vlrd::Vlrd(VlrdConfig config) : config_(config) {
  if (config_.num_sqi == 0 || config_.num_sqi > kLinkTabRows) {
    throw VlrdFault("num_sqi must be in 1.." + std::to_string(kLinkTabRows));
  }
  if (config_.buf_entries == 0 || config_.buf_entries > kMaxEntries) {
    throw VlrdFault("buf_entries must be in 1.." + std::to_string(kMaxEntries));
  }
  link_.resize(config_.num_sqi);
  prod_per_sqi_.assign(config_.num_sqi, 0);
  cons_.resize(config_.buf_entries + 1);
  prod_.resize(config_.buf_entries + 1);
  cons_used_flag_.assign(config_.buf_entries + 1, false);
  prod_used_flag_.assign(config_.buf_entries + 1, false);
  cons_used_flag_[0] = prod_used_flag_[0] = true;  // NULL is never allocatable
}

Vlrd::Vlrd(VlrdConfig config, fabric::Fabric& fabric) : Vlrd(config) {
  injector_ = [&fabric](CoreId core, Addr addr, const Line& data, Cycle now) {
    return fabric.inject_line(core, addr, data, now);
  };
}

void Vlrd::check_sqi(std::uint32_t sqi) const {
  if (sqi >= config_.num_sqi) throw VlrdFault("SQI " + std::to_string(sqi) + " is not mapped on this device");
}

Slot Vlrd::next_free(const std::vector<bool>& used, Slot from) const {
  const auto n = config_.buf_entries;
  for (std::uint32_t i = 1; i <= n; ++i) {
    const auto s = static_cast<Slot>((from - 1 + i) % n + 1);
    if (!used[s]) return s;
  }
  return kNull;
}

AcceptResult Vlrd::accept_producer_packet(std::uint32_t sqi, const Line& data, Cycle now) {
  check_sqi(sqi);
  AcceptResult r;
  r.accepted_at = (prod_port_used_ && prod_port_last_ >= now) ? prod_port_last_ + 1 : now;
  prod_port_used_ = true;
  prod_port_last_ = r.accepted_at;
  if (regs_.PIFR == kNull || (config_.sqi_prod_quota != 0 && prod_per_sqi_[sqi] >= config_.sqi_prod_quota)) {
    ++stats_.prod_nacks;
    return r;
  }
  const Slot s = regs_.PIFR;
  auto& e = prod_[s];
  e = ProdBufEntry{};
  e.valid = true;
  e.sqi = sqi;
  e.data = data;
  e.accepted_at = r.accepted_at;
  e.ack_seq = ++ack_seq_;
  prod_used_flag_[s] = true;
  stats_.max_prod_occupancy = std::max(stats_.max_prod_occupancy, ++prod_used_);
  ++prod_per_sqi_[sqi];
  if (regs_.PITR != kNull) prod_[regs_.PITR].nextIn = s;
  else regs_.PIHR = s;
  regs_.PITR = s;
  regs_.PIFR = next_free(prod_used_flag_, s);
  ++stats_.prod_acks;
  r.status = Status::Ack;
  r.slot = s;
  return r;
}

AcceptResult Vlrd::accept_consumer_request(std::uint32_t sqi, Addr consTgt, CoreId core, Cycle now) {
  check_sqi(sqi);
  if (!is_line_aligned(consTgt)) throw VlrdFault("consumer target " + hex(consTgt) + " is not line aligned");
  AcceptResult r;
  r.accepted_at = (cons_port_used_ && cons_port_last_ >= now) ? cons_port_last_ + 1 : now;
  cons_port_used_ = true;
  cons_port_last_ = r.accepted_at;
  if (regs_.CIFR == kNull) {
    ++stats_.cons_nacks;
    return r;
  }
  const Slot s = regs_.CIFR;
  auto& e = cons_[s];
  e = ConsBufEntry{};
  e.valid = true;
  e.sqi = sqi;
  e.consTgt = consTgt;
  e.core = core;
  e.accepted_at = r.accepted_at;
  cons_used_flag_[s] = true;
  stats_.max_cons_occupancy = std::max(stats_.max_cons_occupancy, ++cons_used_);
  if (regs_.CITR != kNull) cons_[regs_.CITR].nextIn = s;
  else regs_.CIHR = s;
  regs_.CITR = s;
  regs_.CIFR = next_free(cons_used_flag_, s);
  ++stats_.cons_acks;
  r.status = Status::Ack;
  r.slot = s;
  return r;
}

void Vlrd::free_cons(Slot s) {
  cons_[s] = ConsBufEntry{};
  cons_used_flag_[s] = false;
  --cons_used_;
  if (regs_.CIFR == kNull) regs_.CIFR = s;
}

void Vlrd::free_prod(Slot s) {
  --prod_per_sqi_[prod_[s].sqi];
  prod_[s] = ProdBufEntry{};
  prod_used_flag_[s] = false;
  --prod_used_;
  if (regs_.PIFR == kNull) regs_.PIFR = s;
}

std::string Vlrd::map_entry(Slot p, Addr tgt, CoreId core, Slot mapped_from) {
  auto& e = prod_[p];
  e.outValid = true;
  e.consTgt = tgt;
  e.core = core;
  e.mapped = mapped_from;
  e.mapped_at = cycle_;
  e.nextL = kNull;
  e.nextOut = kNull;
  ++stats_.mapped;
  std::string text = "set prodBuf[" + sl(p) + "].OUT, ";
  if (regs_.POTR == kNull) {
    regs_.POHR = regs_.POTR = p;
    text += "POHR, POTR ← " + sl(p) + ", " + sl(p);
  } else {
    const Slot t = regs_.POTR;
    prod_[t].nextOut = p;
    regs_.POTR = p;
    text += "prodBuf[" + sl(t) + "].nextOut, POTR ← " + sl(p) + ", " + sl(p);
  }
  return text;
}

void Vlrd::unlink_out(Slot p) {
  Slot prev = kNull;
  for (Slot s = regs_.POHR; s != kNull; prev = s, s = prod_[s].nextOut) {
    if (s != p) continue;
    const Slot next = prod_[s].nextOut;
    if (prev == kNull) regs_.POHR = next;
    else prod_[prev].nextOut = next;
    if (regs_.POTR == s) regs_.POTR = prev;
    prod_[s].nextOut = kNull;
    return;
  }
}

std::string Vlrd::stage3(const Latch& l, Stage3Write& w) {
  auto& row = link_[l.sqi];
  const std::string s = std::to_string(l.sqi);
  const std::string slot = sl(l.slot);
  w.any = true;
  w.row = l.sqi;

  if (l.kind == Kind::Producer) {
    if (row.consHead != kNull) {
      const Slot c = row.consHead;
      const ConsBufEntry req = cons_[c];
      row.consHead = req.nextL;
      w.fields = kConsHead;
      if (row.consHead == kNull) {
        row.consTail = kNull;
        w.fields |= kConsTail;
      }
      w.by_pop = true;
      free_cons(c);
      return "linkTab[" + s + "].consHead ← " + sl(row.consHead) + " /* nextL_2 */ " +
             map_entry(l.slot, req.consTgt, req.core, c);
    }
    prod_[l.slot].nextL = kNull;
    if (row.prodTail == kNull) {
      row.prodHead = row.prodTail = l.slot;
      w.fields = kProdHead | kProdTail;
      return "linkTab[" + s + "].prod{Head, Tail} ← " + slot + ", " + slot + " /* linkId_2=" + s +
             ", PIHR_2=" + slot + std::string(kNote) + " */";
    }
    const Slot t = row.prodTail;
    prod_[t].nextL = l.slot;
    row.prodTail = l.slot;
    w.fields = kProdTail;
    return "prodBuf[" + sl(t) + "].nextL, linkTab[" + s + "].prodTail ← " + slot + ", " + slot +
           " /* linkId_2=" + s + ", PIHR_2=" + slot + std::string(kNote) + " */";
  }

  if (row.prodHead != kNull) {
    const Slot p = row.prodHead;
    row.prodHead = prod_[p].nextL;
    w.fields = kProdHead;
    if (row.prodHead == kNull) {
      row.prodTail = kNull;
      w.fields |= kProdTail;
    }
    w.by_pop = true;
    const ConsBufEntry req = cons_[l.slot];
    free_cons(l.slot);
    return "linkTab[" + s + "].prodHead ← " + sl(row.prodHead) + " /* nextL_2 */ " +
           map_entry(p, req.consTgt, req.core, l.slot);
  }
  cons_[l.slot].nextL = kNull;
  if (row.consTail == kNull) {
    row.consHead = row.consTail = l.slot;
    w.fields = kConsHead | kConsTail;
    return "linkTab[" + s + "].cons{Head, Tail} ← " + slot + ", " + slot + " /* linkId_2=" + s +
           ", CIHR_2=" + slot + std::string(kNote) + " */";
  }
  const Slot t = row.consTail;
  cons_[t].nextL = l.slot;
  row.consTail = l.slot;
  w.fields = kConsTail;
  return "consBuf[" + sl(t) + "].nextL, linkTab[" + s + "].consTail ← " + slot + ", " + slot +
         " /* linkId_2=" + s + ", CIHR_2=" + slot + std::string(kNote) + " */";
}

std::string Vlrd::stage2(Latch& l) {
  const auto& row = link_[l.sqi];
  const std::string s = std::to_string(l.sqi);
  if (l.kind == Kind::Producer) {
    l.hit = row.consHead != kNull;
    if (l.hit) return "hit: read consBuf[" + sl(row.consHead) + "] for consTgt, nextL /* consHead_1=" + sl(row.consHead) + " */";
    return "miss: append to the linked list in prodBuf /* because consHead_1=NULL, no SQI " + s + " request */";
  }
  l.hit = row.prodHead != kNull;
  if (l.hit) return "hit: read prodBuf[" + sl(row.prodHead) + "] for nextL /* prodHead_1=" + sl(row.prodHead) + " */";
  return "miss: append to the linked list in consBuf /* because prodHead_1=NULL, no SQI " + s + " data */";
}

std::string Vlrd::stage1(Kind kind, const Stage3Write& w, Latch& out, std::string& s3_note) {
  const bool cons = kind == Kind::Consumer;
  Slot& head_reg = cons ? regs_.CIHR : regs_.PIHR;
  Slot& tail_reg = cons ? regs_.CITR : regs_.PITR;
  const Slot slot = head_reg;
  Slot next;
  if (cons) {
    next = cons_[slot].nextIn;
    cons_[slot].nextIn = kNull;
    out.sqi = cons_[slot].sqi;
  } else {
    next = prod_[slot].nextIn;
    prod_[slot].nextIn = kNull;
    out.sqi = prod_[slot].sqi;
  }
  head_reg = next;
  if (next == kNull) tail_reg = kNull;
  out.valid = true;
  out.kind = kind;
  out.slot = slot;
  out.hit = false;

  const auto& row = link_[out.sqi];
  // A consumer looks for waiting data and its own list's tail; a producer
  // looks for waiting requests.
  const char* head_name = cons ? "prodHead" : "consHead";
  const char* tail_name = cons ? "consTail" : "prodTail";
  const unsigned head_field = cons ? kProdHead : kConsHead;
  const unsigned tail_field = cons ? kConsTail : kProdTail;
  const Slot hv = cons ? row.prodHead : row.consHead;
  const Slot tv = cons ? row.consTail : row.prodTail;
  const std::string src = std::string("/* linkTab[") + (cons ? "consBuf[" : "prodBuf[") + sl(slot) +
                          "].linkId], " + (cons ? "CIHR" : "PIHR") + " ← " + sl(next) + " */";

  const unsigned overlap = (w.any && w.row == out.sqi) ? (w.fields & (head_field | tail_field)) : 0u;
  if (overlap != 0 && w.by_pop && (overlap & head_field) != 0) {
    return std::string(head_name) + "_1 ← " + sl(hv) + " /* nextL_2 forwarded */ " + tail_name + "_1 ← " + sl(tv) +
           " " + src;
  }
  std::string text = std::string(head_name) + "_1, " + tail_name + "_1 ← " + sl(hv) + ", " + sl(tv);
  if (overlap != 0) {
    text += " /* RAW */";
    s3_note = std::string(", new ") + ((overlap & head_field) ? head_name : tail_name) + " read by Stage 1";
  }
  return text + " " + src;
}

std::string Vlrd::emit() {
  if (!injector_ || regs_.POHR == kNull) return {};
  const Slot p = regs_.POHR;
  if (prod_[p].mapped_at >= cycle_) return {};
  regs_.POHR = prod_[p].nextOut;
  if (regs_.POHR == kNull) regs_.POTR = kNull;
  prod_[p].nextOut = kNull;

  const ProdBufEntry e = prod_[p];
  const bool ok = injector_(e.core, e.consTgt, e.data, cycle_);
  if (delivery_hook_) delivery_hook_(Delivery{cycle_, e.sqi, e.core, e.consTgt, e.ack_seq, ok}, e.data);
  const std::string base =
      "inject prodBuf[" + sl(p) + "] SQI " + std::to_string(e.sqi) + " → core " + std::to_string(e.core) + " " + hex(e.consTgt);
  if (ok) {
    ++stats_.injections_accepted;
    free_prod(p);
    return base + " accepted";
  }
  ++stats_.injections_rejected;

  // Keep per-SQI order: every later mapped entry of this SQI shifts one
  // target forward, and the rejected entry takes the first of them.
  std::vector<Slot> chain{p};
  for (Slot s = regs_.POHR; s != kNull; s = prod_[s].nextOut) {
    if (prod_[s].sqi == e.sqi) chain.push_back(s);
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    auto& dst = prod_[chain[i]];
    const auto& src = prod_[chain[i + 1]];
    dst.consTgt = src.consTgt;
    dst.core = src.core;
    dst.mapped = src.mapped;
  }
  auto& row = link_[e.sqi];
  const Slot last = chain.back();
  std::string fate;
  if (row.consHead != kNull) {
    const Slot c = row.consHead;
    row.consHead = cons_[c].nextL;
    if (row.consHead == kNull) row.consTail = kNull;
    prod_[last].consTgt = cons_[c].consTgt;
    prod_[last].core = cons_[c].core;
    prod_[last].mapped = c;
    free_cons(c);
    fate = "remapped to consBuf[" + sl(c) + "]";
  } else {
    if (last != p) unlink_out(last);
    auto& le = prod_[last];
    le.outValid = false;
    le.consTgt = 0;
    le.mapped = kNull;
    le.nextL = row.prodHead;
    row.prodHead = last;
    if (row.prodTail == kNull) row.prodTail = last;
    fate = "prodBuf[" + sl(last) + "] relinked at LINK head";
  }
  if (last != p || prod_[p].outValid) {
    prod_[p].nextOut = regs_.POHR;
    regs_.POHR = p;
    if (regs_.POTR == kNull) regs_.POTR = p;
    prod_[p].mapped_at = cycle_;
  }
  return base + " rejected, " + fate;
}

TraceRecord Vlrd::pipeline_tick() {
  ++cycle_;
  ++stats_.ticks;
  TraceRecord r;
  r.cycle = cycle_;

  Stage3Write w;
  if (s2_.valid) {
    r.stage3 = stage3(s2_, w);
    s2_.valid = false;
  }
  if (s1_.valid) {
    r.stage2 = stage2(s1_);
    s2_ = s1_;
    s1_.valid = false;
  }

  const bool cons_ready = regs_.CIHR != kNull && cons_[regs_.CIHR].accepted_at < cycle_;
  const bool prod_ready = regs_.PIHR != kNull && prod_[regs_.PIHR].accepted_at < cycle_;
  std::string note;
  if (cons_ready || prod_ready) {
    Kind k = cons_ready ? Kind::Consumer : Kind::Producer;
    if (cons_ready && prod_ready) k = last_served_ == Kind::Producer ? Kind::Consumer : Kind::Producer;
    r.stage1 = stage1(k, w, s1_, note);
    last_served_ = k;
  }
  if (const auto pos = r.stage3.find(kNote); pos != std::string::npos) r.stage3.replace(pos, kNote.size(), note);

  r.emit = emit();
  if (trace_sink_ && !r.idle()) trace_sink_(r);
  return r;
}

void Vlrd::advance_to(Cycle t) {
  while (cycle_ < t) {
    const bool out_pending = injector_ && regs_.POHR != kNull;
    if (!s1_.valid && !s2_.valid && !out_pending) {
      Cycle next = ~Cycle{0};
      if (regs_.CIHR != kNull) next = std::min(next, cons_[regs_.CIHR].accepted_at + 1);
      if (regs_.PIHR != kNull) next = std::min(next, prod_[regs_.PIHR].accepted_at + 1);
      if (next > t) {
        cycle_ = t;
        return;
      }
      if (next > cycle_ + 1) cycle_ = next - 1;
    }
    pipeline_tick();
  }
}

bool Vlrd::quiescent() const noexcept {
  return prod_used_ == 0 && cons_used_ == 0 && !s1_.valid && !s2_.valid;
}

std::optional<std::string> Vlrd::check_lists() const {
  const std::size_t n = config_.buf_entries;
  std::vector<int> cons_seen(n + 1, 0), prod_seen(n + 1, 0);
  auto walk = [&](Slot head, Slot tail, auto next_of, std::vector<int>& seen,
                  const std::string& name) -> std::optional<std::string> {
    Slot last = kNull;
    std::size_t steps = 0;
    for (Slot s = head; s != kNull; s = next_of(s)) {
      if (++steps > n) return name + ": cycle detected";
      ++seen[s];
      last = s;
    }
    if (last != tail) return name + ": tail register does not match list end";
    return std::nullopt;
  };
  auto next_in_c = [&](Slot s) { return cons_[s].nextIn; };
  auto next_l_c = [&](Slot s) { return cons_[s].nextL; };
  auto next_in_p = [&](Slot s) { return prod_[s].nextIn; };
  auto next_l_p = [&](Slot s) { return prod_[s].nextL; };
  auto next_out = [&](Slot s) { return prod_[s].nextOut; };

  if (auto e = walk(regs_.CIHR, regs_.CITR, next_in_c, cons_seen, "consumer input")) return e;
  if (auto e = walk(regs_.PIHR, regs_.PITR, next_in_p, prod_seen, "producer input")) return e;
  if (auto e = walk(regs_.POHR, regs_.POTR, next_out, prod_seen, "producer output")) return e;
  for (std::uint32_t q = 0; q < config_.num_sqi; ++q) {
    const auto& row = link_[q];
    if (auto e = walk(row.consHead, row.consTail, next_l_c, cons_seen, "SQI " + std::to_string(q) + " consumers")) return e;
    if (auto e = walk(row.prodHead, row.prodTail, next_l_p, prod_seen, "SQI " + std::to_string(q) + " producers")) return e;
  }
  for (const Latch* l : {&s1_, &s2_}) {
    if (!l->valid) continue;
    auto& seen = l->kind == Kind::Consumer ? cons_seen : prod_seen;
    ++seen[l->slot];
  }
  std::uint32_t cons_valid = 0, prod_valid = 0;
  for (std::size_t s = 1; s <= n; ++s) {
    if (cons_[s].valid != (cons_seen[s] == 1)) return "consBuf[" + std::to_string(s) + "] reachability mismatch";
    if (prod_[s].valid != (prod_seen[s] == 1)) return "prodBuf[" + std::to_string(s) + "] reachability mismatch";
    cons_valid += cons_[s].valid;
    prod_valid += prod_[s].valid;
  }
  if (cons_valid != cons_used_ || prod_valid != prod_used_) return "occupancy counter mismatch";
  if ((regs_.CIFR == kNull) != (cons_used_ == n)) return "CIFR inconsistent with occupancy";
  if ((regs_.PIFR == kNull) != (prod_used_ == n)) return "PIFR inconsistent with occupancy";
  if (regs_.CIFR != kNull && cons_[regs_.CIFR].valid) return "CIFR points at a valid slot";
  if (regs_.PIFR != kNull && prod_[regs_.PIFR].valid) return "PIFR points at a valid slot";
  return std::nullopt;
}

}  // namespace vl::vlrd
