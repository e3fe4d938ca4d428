// Copyright 2026 The Edgelight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EDGELIGHT_CODEC_H_
#define EDGELIGHT_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "edgelight/estimator.h"
#include "edgelight/sampling.h"

namespace edgelight {

// Wire layout, little-endian throughout:
//
//   offset 0  "XSPC"
//   offset 4  version (1)
//   offset 5  flags (0)
//   offset 6  anchor_count   u16
//   offset 8  entry_count    u16
//   offset 10 entry_count x { index u16, r u8, g u8, b u8, distance f16 }
//
// Only initialized anchors are written, in ascending index order.
inline constexpr std::size_t kPacketHeaderSize = 10;
inline constexpr std::size_t kPacketEntrySize = 7;
inline constexpr std::uint8_t kPacketVersion = 1;
inline constexpr std::size_t kShPayloadSize = 4 * kShValueCount;

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t EncodedSize(int initialized) {
  return kPacketHeaderSize + kPacketEntrySize * static_cast<std::size_t>(initialized);
}

// Colors become round(c * 255) with halves rounded up; distances are rounded
// to binary16 (nearest, ties to even). Throws InvalidArgument for more than
// 65535 anchors or a distance that is negative, non-finite or above 65504.
Bytes Encode(const UnitSphereCloud& cloud);

// Throws MalformedPacket, with a kind per failure.
UnitSphereCloud Decode(std::span<const std::uint8_t> packet);

std::uint8_t QuantizeColor(float channel);

// 27 binary32 values in canonical order. Throws InvalidArgument on
// non-finite input.
Bytes EncodeSh(const ShCoefficients& sh);
// Throws MalformedPacket unless the payload is exactly 108 bytes.
ShCoefficients DecodeSh(std::span<const std::uint8_t> payload);

}  // namespace edgelight

#endif  // EDGELIGHT_CODEC_H_
