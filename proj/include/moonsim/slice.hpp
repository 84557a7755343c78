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

#include "moonsim/framing.hpp"

#include <optional>
#include <string_view>

namespace moonsim {

/// The four slice types of the network.
enum class SliceKind : std::uint8_t { OtsIntra, OcsIntra, OcsMcn, OtsAgg };

constexpr std::string_view to_string(SliceKind k) noexcept {
    switch (k) {
        case SliceKind::OtsIntra: return "ots_intra";
        case SliceKind::OcsIntra: return "ocs_intra";
        case SliceKind::OcsMcn: return "ocs_mcn";
        case SliceKind::OtsAgg: return "ots_agg";
    }
    return "?";
}

constexpr std::optional<SliceKind> parse_slice_kind(std::string_view s) noexcept {
    for (auto k : {SliceKind::OtsIntra, SliceKind::OcsIntra, SliceKind::OcsMcn, SliceKind::OtsAgg}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    return std::nullopt;
}

constexpr TrafficSlice traffic_slice(SliceKind k) noexcept {
    switch (k) {
        case SliceKind::OtsIntra: return TrafficSlice::Ots;
        case SliceKind::OtsAgg: return TrafficSlice::Aggregation;
        default: return TrafficSlice::Ocs;
    }
}

}  // namespace moonsim
