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

#include "moonsim/node_buffer.hpp"

#include "moonsim/errors.hpp"

#include <algorithm>

namespace moonsim {

namespace {
constexpr std::uint64_t kFrameBytes = FramingConstants::multiframe_wire_bytes;
}

NodeBuffer::NodeBuffer(std::uint64_t capacity_bytes)
    : capacity_bytes_(capacity_bytes), capacity_frames_(static_cast<std::uint32_t>(capacity_bytes / kFrameBytes)) {
    if (capacity_frames_ == 0) {
        throw ConfigError("buffer_bytes", "must hold at least one " + std::to_string(kFrameBytes) + "-byte frame");
    }
}

void NodeBuffer::release(SimTime now) {
    while (!draining_.empty() && draining_.front() <= now) {
        draining_.pop_front();
    }
}

bool NodeBuffer::try_enqueue(const MultiFrame& mf, SimTime now) {
    release(now);
    const std::uint64_t held = (waiting_.size() + draining_.size()) * kFrameBytes;
    if (held + kFrameBytes > capacity_bytes_) {
        return false;
    }
    waiting_.push_back(mf);
    peak_bytes_ = std::max(peak_bytes_, held + kFrameBytes);
    return true;
}

MultiFrame NodeBuffer::begin_transmission(SimTime ends_at) {
    if (waiting_.empty()) {
        throw SimulationError("begin_transmission on an empty buffer");
    }
    MultiFrame mf = waiting_.front();
    waiting_.pop_front();
    // Ends are non-decreasing per buffer; keep the release queue sorted anyway.
    draining_.insert(std::upper_bound(draining_.begin(), draining_.end(), ends_at), ends_at);
    last_end_ = std::max(last_end_, ends_at);
    return mf;
}

std::uint64_t NodeBuffer::occupied_bytes(SimTime now) {
    release(now);
    return (waiting_.size() + draining_.size()) * kFrameBytes;
}

std::size_t NodeBuffer::transmitting(SimTime now) {
    release(now);
    return draining_.size();
}

}  // namespace moonsim
