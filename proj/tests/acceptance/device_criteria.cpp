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

#include <bit>
#include <fstream>
#include <random>
#include <sstream>

#include "criteria.hpp"
#include "vl/endpoints/codec.hpp"
#include "vl/fabric/core.hpp"
#include "vl/isa/isa.hpp"
#include "vl/vlrd/vlrd.hpp"

namespace vl::acceptance {
namespace {

using isa::VlStatus;
using sim::Task;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome golden_trace() {
  Checker c;
  const std::string golden = read_file(std::string(VLSIM_SOURCE_DIR) + "/tests/golden/reference_trace.txt");
  c.expect(!golden.empty(), "golden file missing");
  const Stopwatch t;
  const std::string got = vlrd::reference_scenario_trace();
  const double secs = t.seconds();
  c.expect(got == golden, "trace differs from golden file");
  c.expect(secs < 1.0, "took " + num(secs, 3) + " s");
  c.note(std::to_string(got.size()) + " bytes, " + num(secs * 1e3, 2) + " ms");
  return c.done();
}

// Producer pushes into a 4-entry device with nobody consuming, then a
// single consumer drains one entry and the NACKed push is retried.
struct PressureRig {
  static constexpr Addr kProdLine = Addr{1} << 32;
  static constexpr Addr kConsLine = (Addr{1} << 32) + (Addr{1} << 28);
  sim::Scheduler sched;
  fabric::Fabric fab;
  vlrd::Vlrd dev;
  vlrd::AddressLayout layout;
  isa::VlIsa vl;
  std::vector<VlStatus> statuses;
  VlStatus retry = VlStatus::Nack;
  bool fifth_kept = false;

  PressureRig() : fab(config()), dev(vlrd::VlrdConfig{16, 4}, fab), vl(sched, fab, dev, layout) {}
  static fabric::SimConfig config() {
    fabric::SimConfig c;
    c.num_cores = 2;
    return c;
  }
  Addr sqi1() const { return layout.encode({0, 1, 0, 0}); }
};

Line filled(std::uint8_t b) {
  Line l{};
  l.fill(b);
  return l;
}

Task<void> pressure_script(PressureRig& r) {
  for (std::uint8_t i = 0; i < 5; ++i) {
    const Addr line = PressureRig::kProdLine + i * kLineBytes;
    r.fab.core_store(0, line, filled(i + 1), r.sched.now());
    co_await r.vl.select(0, line);
    r.statuses.push_back(co_await r.vl.push(0, r.sqi1()));
  }
  const Addr fifth = PressureRig::kProdLine + 4 * kLineBytes;
  r.fifth_kept = r.fab.peek(fifth) == filled(5);

  co_await r.vl.select(1, PressureRig::kConsLine);
  co_await r.vl.fetch(1, r.sqi1());
  fabric::Core consumer(r.sched, r.fab, 1);
  for (int i = 0; i < 1000; ++i) {
    if (co_await consumer.load(PressureRig::kConsLine) != Line{}) break;
  }
  co_await r.vl.select(0, fifth);
  r.retry = co_await r.vl.push(0, r.sqi1());
}

struct Schedule {
  std::uint32_t max_occupancy = 0;
  int oracle_mismatches = 0;
  bool lists_ok = true;
};

// Random arrivals straight at the device ports. The oracle: a producer
// packet is ACKed exactly when the buffer has a free entry.
Schedule random_schedule(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  vlrd::Vlrd dev(vlrd::VlrdConfig{4, 4});
  dev.set_injector([&rng](CoreId, Addr, const Line&, Cycle) { return rng() % 4 != 0; });
  Schedule s;
  Addr next_tgt = 0x10000;
  const int steps = 40 + static_cast<int>(rng() % 80);
  for (int t = 1; t <= steps; ++t) {
    dev.advance_to(static_cast<Cycle>(t));
    const auto roll = rng() % 10;
    if (roll < 6) {
      const bool room = dev.prod_occupancy() < 4;
      const auto res = dev.accept_producer_packet(rng() % 4, filled(static_cast<std::uint8_t>(t)), dev.cycle());
      if ((res.status == vlrd::Status::Ack) != room) ++s.oracle_mismatches;
    } else if (roll < 8) {
      dev.accept_consumer_request(rng() % 4, next_tgt += kLineBytes, static_cast<CoreId>(rng() % 4), dev.cycle());
    }
    s.max_occupancy = std::max(s.max_occupancy, dev.prod_occupancy());
  }
  s.lists_ok = !dev.check_lists().has_value();
  return s;
}

Outcome back_pressure() {
  Checker c;
  PressureRig r;
  r.sched.spawn(pressure_script(r));
  r.sched.run();
  c.expect(r.statuses.size() == 5, "script incomplete");
  for (std::size_t i = 0; i < r.statuses.size(); ++i) {
    const VlStatus want = i < 4 ? VlStatus::Ok : VlStatus::Nack;
    c.expect(r.statuses[i] == want, "push " + std::to_string(i + 1) + " status " +
                                        std::to_string(static_cast<int>(r.statuses[i])));
  }
  c.expect(r.fifth_kept, "NACKed line lost its data");
  c.expect(r.retry == VlStatus::Ok, "retry after drain not ACKed");
  c.expect(r.dev.stats().max_prod_occupancy <= 4, "occupancy " + std::to_string(r.dev.stats().max_prod_occupancy));

  std::uint32_t worst = 0;
  int mismatches = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const auto s = random_schedule(seed);
    worst = std::max(worst, s.max_occupancy);
    mismatches += s.oracle_mismatches;
    c.expect(s.lists_ok, "list corruption, seed " + std::to_string(seed));
  }
  c.expect(worst <= 4, "random schedules reached occupancy " + std::to_string(worst));
  c.expect(mismatches == 0, std::to_string(mismatches) + " ACK/NACK decisions disagree with free-entry oracle");
  c.note("ACK x4 then NACK; retry ACK; 1000 schedules, max occupancy " + std::to_string(worst));
  return c.done();
}

Outcome bit_widths() {
  Checker c;
  const auto w = vlrd::compute_bit_widths(256);
  c.expect(w.link_row == 32, "linkTab row " + std::to_string(w.link_row));
  c.expect(w.cons_entry >= 68 && w.cons_entry <= 72, "consBuf entry " + std::to_string(w.cons_entry));
  c.expect(w.prod_entry >= 512 && w.prod_entry <= 590, "prodBuf entry " + std::to_string(w.prod_entry));
  c.note("linkTab " + std::to_string(w.link_row) + ", consBuf " + std::to_string(w.cons_entry) + ", prodBuf " +
         std::to_string(w.prod_entry) + " bits");
  return c.done();
}

Outcome codec() {
  using endpoints::ControlRegion;
  Checker c;
  std::mt19937_64 rng(62);
  int cases = 0;
  for (std::size_t len = 1; len <= ControlRegion::kMaxPayload; ++len) {
    const unsigned want_code = std::min(3, std::countr_zero(static_cast<unsigned>(len)));
    const std::size_t head = ControlRegion::kMaxPayload - len;
    for (int variant = 0; variant < 4; ++variant) {
      std::vector<std::uint8_t> p(len);
      for (auto& b : p) b = variant == 0 ? 0 : variant == 1 ? 0xff : static_cast<std::uint8_t>(rng());
      const Line line = endpoints::encode_control(p);
      const std::string where = "len " + std::to_string(len);
      c.expect(line[ControlRegion::kControlByte] == ((want_code << 6) | head), where + ": control byte");
      c.expect(line[ControlRegion::kReservedByte] == 0, where + ": reserved byte");
      bool prefix_clear = true;
      for (std::size_t i = 0; i < head; ++i) prefix_clear &= line[i] == 0;
      c.expect(prefix_clear, where + ": bytes before head not zero");
      c.expect(!endpoints::is_empty_line(line), where + ": encodes as empty");
      c.expect(endpoints::decode_control(line) == p, where + ": round trip");
      ++cases;
    }
  }
  c.expect(!endpoints::decode_control(Line{}).has_value(), "zero line decodes");

  const vlrd::AddressLayout layouts[] = {{}, {Addr{1} << 39, 20, 24}, {Addr{1} << 38, 18, 19}};
  int tuples = 0;
  for (int i = 0; i < 100000; ++i) {
    const auto& l = layouts[i % 3];
    const vlrd::DeviceAddress f{static_cast<std::uint32_t>(rng() % l.num_vlrd()),
                                static_cast<std::uint32_t>(rng() % l.num_sqi()),
                                static_cast<std::uint32_t>(rng() % vlrd::AddressLayout::kPages),
                                static_cast<std::uint32_t>(rng() % vlrd::AddressLayout::kOffsets)};
    const Addr a = l.encode(f);
    const Addr expect = l.base + (Addr{f.vlrd} << (l.n + 1)) + (Addr{f.sqi} << 18) + (Addr{f.page} << 12) +
                        (Addr{f.offset} << 6);
    c.expect(a == expect, "encode mismatch at tuple " + std::to_string(i));
    c.expect(l.decode(a) == f, "decode mismatch at tuple " + std::to_string(i));
    ++tuples;
  }
  c.note(std::to_string(cases) + " payload cases, " + std::to_string(tuples) + " address tuples");
  return c.done();
}

}  // namespace

std::vector<Criterion> device_criteria() {
  return {
      {"1", "reference mapping trace matches golden file", golden_trace},
      {"7", "prodBuf back-pressure at capacity 4", back_pressure},
      {"8", "storage bit widths at 256 entries", bit_widths},
      {"9", "control codec and device address round trip", codec},
  };
}

}  // namespace vl::acceptance
