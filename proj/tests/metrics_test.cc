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


#include "aquila/metrics.h"

#include <vector>

#include <gtest/gtest.h>

#include "aquila/errors.h"

namespace aquila {
namespace {

Packet C2(std::uint64_t seq, SimTime tx, std::uint32_t bytes = 185) {
  return Packet{TrafficClass::kC2, seq, tx, bytes, std::nullopt, {}};
}

TEST(MetricsTest, LatencyIsReceiveMinusTransmit) {
  MetricsCollector m;
  EXPECT_TRUE(m.RecordRx(C2(7, AtMillis(100)), AtMillis(130)));
  ASSERT_EQ(m.records().size(), 1u);
  EXPECT_EQ(m.records()[0].latency(), Millis(30));
}

TEST(MetricsTest, DuplicateCountedOnce) {
  MetricsCollector m;
  m.RecordRx(C2(7, AtMillis(100)), AtMillis(130));
  EXPECT_FALSE(m.RecordRx(C2(7, AtMillis(100)), AtMillis(140)));
  EXPECT_EQ(m.plr(TrafficClass::kC2).unique_received(), 1u);
  EXPECT_EQ(m.records().size(), 1u);
  EXPECT_EQ(m.duplicates().size(), 1u);
}

TEST(MetricsTest, ReceiveBeforeSendIsAContractViolation) {
  MetricsCollector m;
  EXPECT_THROW(m.RecordRx(C2(1, AtMillis(10)), AtMillis(5)), ContractViolation);
}

TEST(PlrTest, DirectEvaluation) {
  PlrAccumulator plr;
  plr.set_expected(1000);
  for (std::uint64_t s = 0; s < 950; ++s) plr.Record(s);
  ASSERT_TRUE(plr.Plr().has_value());
  EXPECT_NEAR(*plr.Plr(), 0.05, 1e-12);
  EXPECT_FALSE(PlrAccumulator{}.Plr().has_value());
}

TEST(MetricsTest, FrameLatencyUsesLastFragment) {
  MetricsCollector m;
  for (std::uint16_t i = 0; i < 3; ++i) {
    Packet p{TrafficClass::kVideo, i, AtMillis(0), 1000, std::nullopt, {5, i, 3}};
    m.RecordRx(p, AtMillis(40 + 10 * i));
  }
  ASSERT_EQ(m.video_frames().size(), 1u);
  EXPECT_EQ(m.video_frames()[0].latency(), Millis(60));
  EXPECT_EQ(m.video_frames()[0].size_bytes, 3000u);
}

TEST(MetricsTest, ThroughputSeriesIsAdditive) {
  MetricsCollector m;
  // 3 Mbps of video in 1250 B packets and 15 kbps of C2 over two seconds.
  std::uint64_t vseq = 0;
  for (int i = 0; i < 600; ++i) {
    const SimTime t = AtMicros(i * 3333);
    Packet p{TrafficClass::kVideo, vseq++, t, 1250, std::nullopt, {vseq, 0, 1}};
    m.RecordRx(p, t);
  }
  for (int i = 0; i < 20; ++i) m.RecordRx(C2(i, AtMillis(100 * i), 187), AtMillis(100 * i));
  const auto tp = m.Throughput(std::chrono::seconds(1), AtSeconds(2),
                               [](SimTime) { return 5e6; });
  ASSERT_EQ(tp.t_ms.size(), 2u);
  EXPECT_NEAR(tp.video_bps[0] + tp.c2_bps[0], 3.015e6, 0.01e6);
  EXPECT_DOUBLE_EQ(tp.capacity_bps[1], 5e6);
}

TEST(MetricsTest, ThroughputZeroDuringSilence) {
  MetricsCollector m;
  m.RecordRx(C2(0, AtMillis(0)), AtMillis(10));
  const auto tp = m.Throughput(Millis(100), AtMillis(300), {});
  EXPECT_GT(tp.c2_bps[0], 0.0);
  EXPECT_EQ(tp.c2_bps[1], 0.0);
  EXPECT_EQ(tp.video_bps[2], 0.0);
}

TEST(SummaryTest, Percentiles) {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  const auto s = Summarize(v);
  EXPECT_EQ(s.count, 100u);
  EXPECT_DOUBLE_EQ(s.mean, 50.5);
  EXPECT_DOUBLE_EQ(s.p50, 50);
  EXPECT_DOUBLE_EQ(s.p95, 95);
  EXPECT_DOUBLE_EQ(s.p99, 99);
  EXPECT_DOUBLE_EQ(s.max, 100);
}

}  // namespace
}  // namespace aquila
