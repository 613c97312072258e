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

#include "aquila/wire_format.h"

#include <limits>

#include "aquila/errors.h"

namespace aquila {
namespace {

void PutLe(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t GetLe(std::span<const std::uint8_t> in, std::size_t off, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in[off + i]) << (8 * i);
  return v;
}

}  // namespace

std::string_view ToString(TrafficClass cls) {
  return cls == TrafficClass::kC2 ? "c2" : "video";
}

std::string_view ToString(Channel channel) {
  switch (channel) {
    case Channel::kReliableStream: return "stream";
    case Channel::kUnreliableDatagram: return "datagram";
    case Channel::kControl: return "control";
  }
  return "unknown";
}

std::vector<std::uint8_t> EncodeFrame(const FrameHeader& header,
                                      std::span<const std::uint8_t> payload) {
  if (payload.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw ContractViolation("frame payload exceeds 65535 bytes");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderBytes + payload.size());
  PutLe(out, static_cast<std::uint8_t>(header.channel), 1);
  PutLe(out, static_cast<std::uint8_t>(header.cls), 1);
  PutLe(out, header.seq, 8);
  PutLe(out, static_cast<std::uint64_t>(header.tx_time_us), 8);
  PutLe(out, payload.size(), 2);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

std::optional<DecodedFrame> DecodeFrame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderBytes) return std::nullopt;
  const auto channel = bytes[0];
  const auto cls = bytes[1];
  if (channel > static_cast<std::uint8_t>(Channel::kControl)) return std::nullopt;
  if (cls > static_cast<std::uint8_t>(TrafficClass::kVideo)) return std::nullopt;
  DecodedFrame frame;
  frame.header.channel = static_cast<Channel>(channel);
  frame.header.cls = static_cast<TrafficClass>(cls);
  frame.header.seq = GetLe(bytes, 2, 8);
  frame.header.tx_time_us = static_cast<std::int64_t>(GetLe(bytes, 10, 8));
  frame.header.len = static_cast<std::uint16_t>(GetLe(bytes, 18, 2));
  if (bytes.size() != kFrameHeaderBytes + frame.header.len) return std::nullopt;
  frame.payload = bytes.subspan(kFrameHeaderBytes);
  return frame;
}

}  // namespace aquila
