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

#include "vl/workloads/system.hpp"

#include <stdexcept>

namespace vl::workloads {

std::string_view to_string(Backend b) noexcept {
  switch (b) {
    case Backend::Vl: return "vl";
    case Backend::Cas: return "cas";
    case Backend::CasUnbounded: return "cas_unbounded";
    case Backend::Lock: return "lock";
  }
  return "?";
}

Backend parse_backend(std::string_view s) {
  if (s == "vl") return Backend::Vl;
  if (s == "cas") return Backend::Cas;
  if (s == "cas_unbounded") return Backend::CasUnbounded;
  if (s == "lock") return Backend::Lock;
  throw std::invalid_argument("unknown backend '" + std::string(s) + "'");
}

System::System(const fabric::SimConfig& cfg, vlrd::VlrdConfig device)
    : config(cfg), fab(cfg), dev(device, fab), vl(sched, fab, dev, {}), rt(vl, space) {
  for (CoreId c = 0; c < cfg.num_cores; ++c) cores.emplace_back(sched, fab, c);
}

}  // namespace vl::workloads
