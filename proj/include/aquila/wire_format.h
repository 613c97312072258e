// Copyright 2026 The Aquila Authors
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

#ifndef AQUILA_WIRE_FORMAT_H_
#define AQUILA_WIRE_FORMAT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aquila/packet.h"

namespace aquila {

// Fixed little-endian frame header:
//   channel:u8 | class:u8 | seq:u64 | tx_time_us:u64 | len:u16 | payload[len]
struct FrameHeader {
  Channel channel = Channel::kReliableStream;
  TrafficClass cls = TrafficClass::kC2;
  std::uint64_t seq = 0;
  std::int64_t tx_time_us = 0;
  std::uint16_t len = 0;
};

inline constexpr std::size_t kFrameHeaderBytes = 20;

struct DecodedFrame {
  FrameHeader header;
  std::span<const std::uint8_t> payload;
};

// Throws ContractViolation if payload exceeds 65535 bytes.
std::vector<std::uint8_t> EncodeFrame(const FrameHeader& header,
                                      std::span<const std::uint8_t> payload);

// Empty optional on truncation, unknown enum values, or length mismatch.
std::optional<DecodedFrame> DecodeFrame(std::span<const std::uint8_t> bytes);

}  // namespace aquila

#endif  // AQUILA_WIRE_FORMAT_H_
