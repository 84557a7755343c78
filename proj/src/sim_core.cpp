/*
 * Copyright 2026 The moonsim Authors
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

#include "moonsim/sim_core.hpp"

namespace moonsim {

void fail_schedule_in_past(SimTime at, SimTime now) {
    throw SimulationError("event scheduled in the past: at " + std::to_string(at.ps()) + " ps, clock " +
                          std::to_string(now.ps()) + " ps");
}

}  // namespace moonsim
