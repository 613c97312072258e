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

#include <algorithm>
#include <array>
#include <vector>

#include <gtest/gtest.h>

namespace aquila {
namespace {

TEST(WireFormatTest, GoldenEncoding) {
  const FrameHeader h{Channel::kUnreliableDatagram, TrafficClass::kVideo, 0x0102030405060708ULL,
                      1'500'000, 0};
  const std::array<std::uint8_t, 3> payload{0xAA, 0xBB, 0xCC};
  const std::vector<std::uint8_t> expected{
      0x01,                                            // channel
      0x01,                                            // class
      0x08, 0x07, 0x06, 0x05, 0x04, 0x03, 0x02, 0x01,  // seq
      0x60, 0xE3, 0x16, 0x00, 0x00, 0x00, 0x00, 0x00,  // tx_time_us = 1.5 s
      0x03, 0x00,                                      // len
      0xAA, 0xBB, 0xCC};
  EXPECT_EQ(EncodeFrame(h, payload), expected);
}

TEST(WireFormatTest, HeaderIsTwentyBytes) {
  const FrameHeader h{Channel::kReliableStream, TrafficClass::kC2, 41, 0, 0};
  EXPECT_EQ(EncodeFrame(h, {}).size(), kFrameHeaderBytes);
  EXPECT_EQ(kFrameHeaderBytes, 20u);
}

TEST(WireFormatTest, RoundTrip) {
  std::vector<std::uint8_t> payload(185);
  for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<std::uint8_t>(i * 7);
  const FrameHeader h{Channel::kReliableStream, TrafficClass::kC2, 42, 123'456'789, 0};
  const auto bytes = EncodeFrame(h, payload);
  const auto decoded = DecodeFrame(bytes);
  ASSERT_TRUE(decoded.has_value());
  EXPECT_EQ(decoded->header.channel, h.channel);
  EXPECT_EQ(decoded->header.cls, h.cls);
  EXPECT_EQ(decoded->header.seq, 42u);
  EXPECT_EQ(decoded->header.tx_time_us, 123'456'789);
  EXPECT_EQ(decoded->header.len, 185);
  EXPECT_TRUE(std::equal(decoded->payload.begin(), decoded->payload.end(), payload.begin(),
                         payload.end()));
}

TEST(WireFormatTest, RejectsMalformedInput) {
  const FrameHeader h{Channel::kControl, TrafficClass::kC2, 1, 1, 0};
  auto bytes = EncodeFrame(h, std::vector<std::uint8_t>(4, 0));
  EXPECT_FALSE(DecodeFrame(std::span(bytes).first(10)).has_value());
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_FALSE(DecodeFrame(truncated).has_value());
  auto bad_channel = bytes;
  bad_channel[0] = 9;
  EXPECT_FALSE(DecodeFrame(bad_channel).has_value());
  auto bad_class = bytes;
  bad_class[1] = 2;
  EXPECT_FALSE(DecodeFrame(bad_class).has_value());
}

}  // namespace
}  // namespace aquila
