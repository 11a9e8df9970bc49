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

#include <sstream>

#include "vl/vlrd/vlrd.hpp"

namespace vl::vlrd {

std::string reference_scenario_trace() {
  Vlrd dev(VlrdConfig{});
  std::ostringstream out;
  dev.set_trace_sink([&out](const TraceRecord& r) { out << format_trace(r); });

  struct Arrival {
    bool producer;
    std::uint32_t sqi;
  };
  // One packet per cycle starting at cycle 0. Within a cycle the port
  // accepts before the pipeline ticks.
  const Arrival arrivals[] = {{false, 1}, {false, 0}, {true, 1}, {true, 2}, {true, 1}};
  Line data{};
  Cycle c = 0;
  for (const auto& a : arrivals) {
    if (a.producer) {
      data[0] = static_cast<std::uint8_t>(c);
      dev.accept_producer_packet(a.sqi, data, c);
    } else {
      dev.accept_consumer_request(a.sqi, 0x1000 * (c + 1), 0, c);
    }
    if (c > 0) dev.pipeline_tick();
    ++c;
  }
  dev.pipeline_tick();
  return out.str();
}

}  // namespace vl::vlrd
