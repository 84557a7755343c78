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

#include "moonsim/framing.hpp"

#include "moonsim/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace moonsim {
namespace {

using FC = FramingConstants;

constexpr std::array<std::uint8_t, 4> kMagic{'M', 'O', 'M', 'F'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint32_t kOverheadBitsPerFrame = 24;
constexpr std::uint32_t kPayloadBytesPerBlock = FC::block_payload_bits / 8;

static_assert(kOverheadBitsPerFrame * FC::frames_per_multiframe >= FC::blocks_per_multiframe);

bool get_bit(std::span<const std::uint8_t> data, std::uint64_t i) {
    return (data[i / 8] >> (7 - i % 8)) & 1U;
}

void set_payload_bit(Block& b, std::uint32_t i) {
    b.payload[i / 64] |= std::uint64_t{1} << (63 - i % 64);
}

std::uint8_t payload_byte(const Block& b, std::uint32_t k) {
    return static_cast<std::uint8_t>(b.payload[k / 8] >> (56 - 8 * (k % 8)));
}

void put_payload_byte(Block& b, std::uint32_t k, std::uint8_t v) {
    b.payload[k / 8] |= std::uint64_t{v} << (56 - 8 * (k % 8));
}

template <class T>
void put_le(std::vector<std::uint8_t>& out, std::size_t at, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out[at + i] = static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i));
    }
}

template <class T>
T get_le(std::span<const std::uint8_t> in, std::size_t at) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        v |= std::uint64_t{in[at + i]} << (8 * i);
    }
    return static_cast<T>(v);
}

void check_packet_bits(std::uint64_t packet_bits) {
    if (packet_bits == 0) {
        throw ConfigError("packet_bits", "packet must carry at least one bit");
    }
}

}  // namespace

std::vector<Block> segment_packet(std::uint64_t packet_bits, SimTime arrival_time) {
    check_packet_bits(packet_bits);
    const std::uint32_t n = blocks_for_bits(packet_bits);
    std::vector<Block> blocks(n);
    for (auto& b : blocks) {
        b.arrival_time = arrival_time;
    }
    const auto tail = static_cast<std::uint16_t>(packet_bits - std::uint64_t{n - 1} * FC::block_bits);
    blocks.back().valid_bits = tail;
    return blocks;
}

std::vector<Block> segment_packet(std::span<const std::uint8_t> data, std::uint64_t packet_bits,
                                  SimTime arrival_time) {
    check_packet_bits(packet_bits);
    if (data.size() * 8 < packet_bits) {
        throw ConfigError("packet_bits", "exceeds the " + std::to_string(data.size() * 8) + " bits supplied");
    }
    std::vector<Block> blocks = segment_packet(packet_bits, arrival_time);
    for (std::uint64_t i = 0; i < packet_bits; ++i) {
        if (!get_bit(data, i)) {
            continue;
        }
        Block& b = blocks[i / FC::block_bits];
        const auto within = static_cast<std::uint32_t>(i % FC::block_bits);
        if (within == 0) {
            b.overhead_bit = true;
        } else {
            set_payload_bit(b, within - 1);
        }
    }
    return blocks;
}

std::vector<MultiFrameContent> build_multiframes(std::span<const Block> blocks, NodeId destination,
                                                 TrafficSlice slice, NodeId source) {
    if (blocks.empty()) {
        throw ConfigError("blocks", "nothing to frame");
    }
    std::vector<MultiFrameContent> out;
    out.reserve((blocks.size() + FC::blocks_per_multiframe - 1) / FC::blocks_per_multiframe);
    for (std::size_t first = 0; first < blocks.size(); first += FC::blocks_per_multiframe) {
        const std::size_t last = std::min(blocks.size(), first + FC::blocks_per_multiframe);
        MultiFrameContent mf;
        mf.frame.source = source;
        mf.frame.destination = destination;
        mf.frame.slice = slice;
        mf.frame.blocks_used = static_cast<std::uint16_t>(last - first);
        mf.frame.generation_time = blocks[last - 1].arrival_time;
        mf.blocks.assign(blocks.begin() + static_cast<std::ptrdiff_t>(first),
                         blocks.begin() + static_cast<std::ptrdiff_t>(last));
        out.push_back(std::move(mf));
    }
    return out;
}

std::vector<std::uint8_t> serialize(const MultiFrameContent& mf) {
    const auto used = mf.frame.blocks_used;
    if (used == 0 || used > FC::blocks_per_multiframe || mf.blocks.size() != used) {
        throw std::invalid_argument("serialize: blocks_used " + std::to_string(used) + " does not match " +
                                    std::to_string(mf.blocks.size()) + " blocks");
    }
    std::vector<std::uint8_t> out(kSerializedMultiFrameBytes, 0);
    std::copy(kMagic.begin(), kMagic.end(), out.begin());
    out[4] = kVersion;
    out[5] = static_cast<std::uint8_t>(mf.frame.slice);
    put_le<std::uint16_t>(out, 6, used);
    put_le<std::uint32_t>(out, 8, mf.frame.destination);
    put_le<std::uint32_t>(out, 12, mf.frame.source);
    put_le<std::int64_t>(out, 16, mf.frame.generation_time.ps());

    for (std::uint32_t f = 0; f < FC::frames_per_multiframe; ++f) {
        const std::size_t base = kMultiFrameEnvelopeBytes + std::size_t{f} * FC::osu_total_bytes;
        out[base] = static_cast<std::uint8_t>(f);
        out[base + 1] = static_cast<std::uint8_t>((f == 0 ? 0x80U : 0U) | static_cast<std::uint8_t>(mf.frame.slice));
        put_le<std::uint16_t>(out, base + 2, used);
        for (std::uint32_t j = 0; j < kOverheadBitsPerFrame; ++j) {
            const std::uint32_t k = f * kOverheadBitsPerFrame + j;
            if (k < used && mf.blocks[k].overhead_bit) {
                out[base + 4 + j / 8] |= static_cast<std::uint8_t>(0x80U >> (j % 8));
            }
        }
        for (std::uint32_t p = 0; p < FC::osu_payload_bytes; ++p) {
            const std::uint32_t stream_byte = f * FC::osu_payload_bytes + p;
            const std::uint32_t k = stream_byte / kPayloadBytesPerBlock;
            if (k < used) {
                out[base + FC::osu_overhead_bytes + p] = payload_byte(mf.blocks[k], stream_byte % kPayloadBytesPerBlock);
            }
        }
    }
    return out;
}

MultiFrameContent deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kSerializedMultiFrameBytes) {
        throw std::invalid_argument("deserialize: expected " + std::to_string(kSerializedMultiFrameBytes) +
                                    " bytes, got " + std::to_string(bytes.size()));
    }
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin()) || bytes[4] != kVersion) {
        throw std::invalid_argument("deserialize: bad magic or version");
    }
    if (bytes[5] > static_cast<std::uint8_t>(TrafficSlice::Aggregation)) {
        throw std::invalid_argument("deserialize: unknown slice " + std::to_string(bytes[5]));
    }
    MultiFrameContent mf;
    mf.frame.slice = static_cast<TrafficSlice>(bytes[5]);
    mf.frame.blocks_used = get_le<std::uint16_t>(bytes, 6);
    mf.frame.destination = get_le<std::uint32_t>(bytes, 8);
    mf.frame.source = get_le<std::uint32_t>(bytes, 12);
    mf.frame.generation_time = SimTime::from_ps(get_le<std::int64_t>(bytes, 16));
    const auto used = mf.frame.blocks_used;
    if (used == 0 || used > FC::blocks_per_multiframe) {
        throw std::invalid_argument("deserialize: blocks_used " + std::to_string(used) + " out of range");
    }
    mf.blocks.resize(used);
    for (auto& b : mf.blocks) {
        b.arrival_time = mf.frame.generation_time;
    }
    for (std::uint32_t f = 0; f < FC::frames_per_multiframe; ++f) {
        const std::size_t base = kMultiFrameEnvelopeBytes + std::size_t{f} * FC::osu_total_bytes;
        if (bytes[base] != f || get_le<std::uint16_t>(bytes, base + 2) != used) {
            throw std::invalid_argument("deserialize: OSU frame " + std::to_string(f) + " header mismatch");
        }
        for (std::uint32_t j = 0; j < kOverheadBitsPerFrame; ++j) {
            const std::uint32_t k = f * kOverheadBitsPerFrame + j;
            if (k < used && (bytes[base + 4 + j / 8] & (0x80U >> (j % 8)))) {
                mf.blocks[k].overhead_bit = true;
            }
        }
        for (std::uint32_t p = 0; p < FC::osu_payload_bytes; ++p) {
            const std::uint32_t stream_byte = f * FC::osu_payload_bytes + p;
            const std::uint32_t k = stream_byte / kPayloadBytesPerBlock;
            if (k < used) {
                put_payload_byte(mf.blocks[k], stream_byte % kPayloadBytesPerBlock,
                                 bytes[base + FC::osu_overhead_bytes + p]);
            }
        }
    }
    return mf;
}

}  // namespace moonsim
