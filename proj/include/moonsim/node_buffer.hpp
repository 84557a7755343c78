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
#include "moonsim/time.hpp"

#include <cstdint>
#include <deque>

namespace moonsim {

/// Byte-budgeted drop-tail FIFO of multi-frames.
///
/// A frame holds its 6144 bytes from admission until its transmission
/// completes, not merely until transmission starts: begin_transmission()
/// moves the head into a draining set that is released lazily once the
/// clock passes each frame's end time.
class NodeBuffer {
public:
    explicit NodeBuffer(std::uint64_t capacity_bytes);

    /// Frames that fit: floor(capacity / 6144).
    [[nodiscard]] std::uint32_t capacity_frames() const noexcept { return capacity_frames_; }
    [[nodiscard]] std::uint64_t capacity_bytes() const noexcept { return capacity_bytes_; }

    /// All-or-nothing admission at time `now`. Returns false on overflow.
    bool try_enqueue(const MultiFrame& mf, SimTime now);

    [[nodiscard]] bool empty() const noexcept { return waiting_.empty(); }
    [[nodiscard]] std::size_t waiting() const noexcept { return waiting_.size(); }
    [[nodiscard]] const MultiFrame& front() const { return waiting_.front(); }

    /// Removes the head; its bytes stay reserved until `ends_at`.
    MultiFrame begin_transmission(SimTime ends_at);

    /// Bytes held at `now` (waiting plus still transmitting).
    [[nodiscard]] std::uint64_t occupied_bytes(SimTime now);
    [[nodiscard]] std::uint64_t peak_bytes() const noexcept { return peak_bytes_; }

    /// Frames whose transmission started and ends after `now`.
    [[nodiscard]] std::size_t transmitting(SimTime now);

    /// End time of the most recent transmission (zero if none yet).
    [[nodiscard]] SimTime last_end() const noexcept { return last_end_; }

private:
    void release(SimTime now);

    std::uint64_t capacity_bytes_;
    std::uint32_t capacity_frames_;
    std::deque<MultiFrame> waiting_;
    std::deque<SimTime> draining_;
    SimTime last_end_ = SimTime::zero();
    std::uint64_t peak_bytes_ = 0;
};

}  // namespace moonsim
