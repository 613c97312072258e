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


#include "aquila/traffic.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "aquila/errors.h"

namespace aquila {
namespace {

TEST(C2SourceTest, TenHertzForOneSecond) {
  C2Source src(C2SourceConfig{});
  const auto out = src.Tick(AtMillis(999));
  ASSERT_EQ(out.size(), 10u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].seq, i);
    EXPECT_EQ(out[i].tx_time, AtMillis(100 * static_cast<std::int64_t>(i)));
    EXPECT_EQ(out[i].size_bytes, 185u);
    EXPECT_EQ(out[i].cls, TrafficClass::kC2);
  }
}

TEST(C2SourceTest, IntervalIsExactOverLongRuns) {
  C2Source src(C2SourceConfig{.rate_hz = 30.0});
  const auto out = src.Tick(AtSeconds(3600));
  ASSERT_EQ(out.size(), 3600u * 30u + 1u);
  EXPECT_EQ(out.back().tx_time, AtSeconds(3600));
}

TEST(VideoSourceTest, MeanFrameSizeFollowsTarget) {
  VideoSource src(VideoSourceConfig{.initial_bitrate_bps = 3e6, .jitter = 0.0});
  EXPECT_DOUBLE_EQ(src.mean_frame_bytes(), 12'500.0);
  const auto out = src.Tick(kSimStart);
  std::uint64_t bytes = 0;
  for (const auto& p : out) bytes += p.size_bytes;
  EXPECT_EQ(bytes, 12'500u);
  ASSERT_EQ(out.size(), 11u);  // ceil(12500 / 1200)
  for (const auto& p : out) {
    EXPECT_LE(p.size_bytes, 1200u);
    EXPECT_EQ(p.frame.frame_seq, 0u);
    EXPECT_EQ(p.frame.count, 11);
  }
}

TEST(VideoSourceTest, RateChangeAppliesFromNextFrame) {
  VideoSource src(VideoSourceConfig{.initial_bitrate_bps = 3e6, .jitter = 0.0});
  src.Tick(kSimStart);
  src.ApplyRate(2686.5e3);
  EXPECT_DOUBLE_EQ(src.target_bitrate(), 3e6);
  src.Tick(AtMillis(34));
  EXPECT_DOUBLE_EQ(src.target_bitrate(), 2686.5e3);
  src.ApplyRate(1.5e6);
  const auto frame = src.Tick(AtMillis(67));
  std::uint64_t bytes = 0;
  for (const auto& p : frame) bytes += p.size_bytes;
  EXPECT_EQ(bytes, 6250u);
}

TEST(VideoSourceTest, OutOfRangeRateIsRejected) {
  VideoSource src(VideoSourceConfig{});
  EXPECT_THROW(src.ApplyRate(0.0), ContractViolation);
  EXPECT_THROW(src.ApplyRate(20e6), ContractViolation);
}

TEST(VideoSourceTest, ZeroInitialRateClampsToMinimum) {
  VideoSource src(VideoSourceConfig{.initial_bitrate_bps = 0.0});
  EXPECT_DOUBLE_EQ(src.target_bitrate(), 300e3);
}

TEST(VideoSourceTest, JitteredRateTracksTargetOverFiveSeconds) {
  VideoSource src(VideoSourceConfig{.initial_bitrate_bps = 2e6, .jitter = 0.2, .seed = 4});
  std::uint64_t bytes = 0;
  for (const auto& p : src.Tick(AtMillis(4999))) bytes += p.size_bytes;
  EXPECT_EQ(src.frames_emitted(), 150u);
  EXPECT_NEAR(bytes * 8.0 / 5.0, 2e6, 0.05 * 2e6);
}

TEST(VideoSourceTest, SequenceNumbersStrictlyIncrease) {
  VideoSource src(VideoSourceConfig{.seed = 2});
  const auto out = src.Tick(AtSeconds(2));
  for (std::size_t i = 1; i < out.size(); ++i) ASSERT_EQ(out[i].seq, out[i - 1].seq + 1);
}

TEST(VideoSourceTest, SeedDeterminesFrames) {
  VideoSource a(VideoSourceConfig{.seed = 8});
  VideoSource b(VideoSourceConfig{.seed = 8});
  const auto pa = a.Tick(AtSeconds(1));
  const auto pb = b.Tick(AtSeconds(1));
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) ASSERT_EQ(pa[i].size_bytes, pb[i].size_bytes);
}

double WorstOneSecondDeviation(double rate_control_s) {
  VideoSource src(VideoSourceConfig{
      .initial_bitrate_bps = 1e6, .jitter = 0.2, .rate_control_s = rate_control_s, .seed = 9});
  double worst = 0;
  for (int w = 0; w < 200; ++w) {
    std::uint64_t bytes = 0;
    for (const auto& p : src.Tick(AtSeconds(w + 1) - Duration{1})) bytes += p.size_bytes;
    worst = std::max(worst, std::abs(bytes * 8.0 / 1e6 - 1.0));
  }
  return worst;
}

TEST(VideoSourceTest, RateControlPaysBackSizeError) {
  const double controlled = WorstOneSecondDeviation(0.5);
  const double open_loop = WorstOneSecondDeviation(0.0);
  EXPECT_LT(controlled, 0.05);
  EXPECT_LT(controlled, open_loop);
}

TEST(VideoSourceTest, RateControlKeepsPerFrameJitter) {
  VideoSource src(VideoSourceConfig{.initial_bitrate_bps = 3e6, .jitter = 0.2, .seed = 3});
  std::map<std::uint64_t, std::uint64_t> frames;
  for (const auto& p : src.Tick(AtSeconds(10))) frames[p.frame.frame_seq] += p.size_bytes;
  double lo = 1e18;
  double hi = 0;
  for (const auto& [seq, bytes] : frames) {
    lo = std::min(lo, static_cast<double>(bytes));
    hi = std::max(hi, static_cast<double>(bytes));
  }
  EXPECT_LT(lo, 0.85 * 12'500);
  EXPECT_GT(hi, 1.15 * 12'500);
  EXPECT_LT(std::abs(src.size_error_bytes()), 2 * 12'500.0);
}

}  // namespace
}  // namespace aquila
