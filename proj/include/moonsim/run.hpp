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

#pragma once

#include "moonsim/errors.hpp"
#include "moonsim/sim_core.hpp"
#include "moonsim/time.hpp"

#include <cstdint>
#include <string>

namespace moonsim {

/// Per-run settings shared by every slice model.
struct RunParams {
    std::uint64_t seed = 1;
    SimTime horizon = kDefaultHorizon;
    /// Events at or before this instant are excluded from rates and delays.
    SimTime warmup = SimTime::zero();
    std::string scenario_id = "run";

    void validate() const {
        if (horizon <= SimTime::zero()) {
            throw ConfigError("horizon_us", "must be positive");
        }
        if (warmup < SimTime::zero() || warmup >= horizon) {
            throw ConfigError("warmup_us", "must lie in [0, horizon)");
        }
    }
};

}  // namespace moonsim
