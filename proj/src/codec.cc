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

#include "edgelight/codec.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "edgelight/errors.h"
#include "edgelight/half.h"

namespace edgelight {
namespace {

constexpr std::uint8_t kMagic[4] = {'X', 'S', 'P', 'C'};

void PutU16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xffu));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutU32(Bytes& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xffu));
  }
}

std::uint16_t GetU16(std::span<const std::uint8_t> in, std::size_t at) {
  return static_cast<std::uint16_t>(in[at] | (in[at + 1] << 8));
}

std::uint32_t GetU32(std::span<const std::uint8_t> in, std::size_t at) {
  return static_cast<std::uint32_t>(in[at]) |
         (static_cast<std::uint32_t>(in[at + 1]) << 8) |
         (static_cast<std::uint32_t>(in[at + 2]) << 16) |
         (static_cast<std::uint32_t>(in[at + 3]) << 24);
}

}  // namespace

std::string_view ToString(PacketError error) {
  switch (error) {
    case PacketError::kBadMagic: return "bad-magic";
    case PacketError::kUnsupportedVersion: return "unsupported-version";
    case PacketError::kBadFlags: return "bad-flags";
    case PacketError::kTruncated: return "truncated";
    case PacketError::kLengthMismatch: return "length-mismatch";
    case PacketError::kEntryCountOverflow: return "entry-count-overflow";
    case PacketError::kIndexOutOfRange: return "index-out-of-range";
    case PacketError::kUnsortedIndices: return "unsorted-indices";
    case PacketError::kInvalidDistance: return "invalid-distance";
  }
  return "unknown";
}

std::uint8_t QuantizeColor(float channel) {
  const double scaled = std::floor(static_cast<double>(channel) * 255.0 + 0.5);
  if (!(scaled > 0.0)) return 0;
  if (scaled >= 255.0) return 255;
  return static_cast<std::uint8_t>(scaled);
}

Bytes Encode(const UnitSphereCloud& cloud) {
  if (cloud.anchor_count() > 0xffff) {
    throw InvalidArgument("anchor count does not fit in 16 bits");
  }
  const int initialized = cloud.initialized_count();
  Bytes out;
  out.reserve(EncodedSize(initialized));
  for (std::uint8_t c : kMagic) out.push_back(c);
  out.push_back(kPacketVersion);
  out.push_back(0);
  PutU16(out, static_cast<std::uint16_t>(cloud.anchor_count()));
  PutU16(out, static_cast<std::uint16_t>(initialized));
  for (int a = 0; a < cloud.anchor_count(); ++a) {
    const AnchorEntry& e = cloud[a];
    if (!e.initialized) continue;
    if (!std::isfinite(e.distance) || e.distance < 0.0f ||
        e.distance > kHalfMax) {
      throw InvalidArgument("anchor " + std::to_string(a) +
                            " has a distance outside [0, 65504]");
    }
    PutU16(out, static_cast<std::uint16_t>(a));
    out.push_back(QuantizeColor(e.color.r));
    out.push_back(QuantizeColor(e.color.g));
    out.push_back(QuantizeColor(e.color.b));
    PutU16(out, FloatToHalfBits(e.distance == 0.0f ? 0.0f : e.distance));
  }
  return out;
}

UnitSphereCloud Decode(std::span<const std::uint8_t> packet) {
  if (packet.size() < kPacketHeaderSize) {
    throw MalformedPacket(PacketError::kTruncated,
                          "packet shorter than its header");
  }
  if (std::memcmp(packet.data(), kMagic, sizeof(kMagic)) != 0) {
    throw MalformedPacket(PacketError::kBadMagic, "expected XSPC");
  }
  if (packet[4] != kPacketVersion) {
    throw MalformedPacket(PacketError::kUnsupportedVersion,
                          "version " + std::to_string(packet[4]));
  }
  if (packet[5] != 0) {
    throw MalformedPacket(PacketError::kBadFlags,
                          "flags " + std::to_string(packet[5]));
  }
  const int anchor_count = GetU16(packet, 6);
  const int entry_count = GetU16(packet, 8);
  if (anchor_count == 0) {
    throw MalformedPacket(PacketError::kIndexOutOfRange, "zero anchor count");
  }
  if (entry_count > anchor_count) {
    throw MalformedPacket(PacketError::kEntryCountOverflow,
                          std::to_string(entry_count) + " entries for " +
                              std::to_string(anchor_count) + " anchors");
  }
  const std::size_t expected = EncodedSize(entry_count);
  if (packet.size() < expected) {
    throw MalformedPacket(PacketError::kTruncated,
                          std::to_string(packet.size()) + " bytes, expected " +
                              std::to_string(expected));
  }
  if (packet.size() > expected) {
    throw MalformedPacket(PacketError::kLengthMismatch,
                          std::to_string(packet.size()) + " bytes, expected " +
                              std::to_string(expected));
  }

  UnitSphereCloud cloud(anchor_count);
  int previous = -1;
  for (int k = 0; k < entry_count; ++k) {
    const std::size_t at = kPacketHeaderSize + kPacketEntrySize * k;
    const int index = GetU16(packet, at);
    if (index >= anchor_count) {
      throw MalformedPacket(PacketError::kIndexOutOfRange,
                            "index " + std::to_string(index));
    }
    if (index <= previous) {
      throw MalformedPacket(PacketError::kUnsortedIndices,
                            "index " + std::to_string(index) + " after " +
                                std::to_string(previous));
    }
    previous = index;
    const float distance = HalfBitsToFloat(GetU16(packet, at + 5));
    if (!std::isfinite(distance) || std::signbit(distance)) {
      throw MalformedPacket(PacketError::kInvalidDistance,
                            "anchor " + std::to_string(index));
    }
    const Rgb color{packet[at + 2] / 255.0f, packet[at + 3] / 255.0f,
                    packet[at + 4] / 255.0f};
    cloud.Set(static_cast<AnchorIndex>(index), color, distance);
  }
  return cloud;
}

Bytes EncodeSh(const ShCoefficients& sh) {
  Bytes out;
  out.reserve(kShPayloadSize);
  for (double v : sh.values) {
    const float f = static_cast<float>(v);
    if (!std::isfinite(f)) throw InvalidArgument("SH value is not finite");
    PutU32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

ShCoefficients DecodeSh(std::span<const std::uint8_t> payload) {
  if (payload.size() != kShPayloadSize) {
    throw MalformedPacket(PacketError::kLengthMismatch,
                          "SH payload of " + std::to_string(payload.size()) +
                              " bytes");
  }
  ShCoefficients sh;
  for (int i = 0; i < kShValueCount; ++i) {
    sh.values[i] = std::bit_cast<float>(GetU32(payload, 4 * i));
  }
  return sh;
}

}  // namespace edgelight
