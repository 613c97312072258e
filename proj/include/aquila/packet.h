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

#ifndef AQUILA_PACKET_H_
#define AQUILA_PACKET_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "aquila/sim_time.h"

namespace aquila {

enum class TrafficClass : std::uint8_t { kC2 = 0, kVideo = 1 };

// Transport channel a frame travels on.
enum class Channel : std::uint8_t {
  kReliableStream = 0,
  kUnreliableDatagram = 1,
  kControl = 2,
};

std::string_view ToString(TrafficClass cls);
std::string_view ToString(Channel channel);

// Position of a video fragment inside its frame.
struct FrameInfo {
  std::uint64_t frame_seq = 0;
  std::uint16_t index = 0;
  std::uint16_t count = 1;
};

// One application unit as produced by a source. `seq` is the per-class
// monotonic counter; `tx_time` the embedded send timestamp.
struct Packet {
  TrafficClass cls = TrafficClass::kC2;
  std::uint64_t seq = 0;
  SimTime tx_time{};
  std::uint32_t size_bytes = 0;
  std::optional<Duration> deadline_age;
  FrameInfo frame;
};

// What crosses the emulated link: a packet plus transport framing state.
// `packet_number` is unique per transmission (retransmissions get a new one).
struct TransportFrame {
  Channel channel = Channel::kReliableStream;
  Packet packet;
  std::uint64_t packet_number = 0;
  std::uint64_t stream_offset = 0;

  std::uint32_t size_bytes() const { return packet.size_bytes; }
};

}  // namespace aquila

#endif  // AQUILA_PACKET_H_
