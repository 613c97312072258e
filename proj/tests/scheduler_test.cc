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


#include "aquila/scheduler.h"

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "aquila/errors.h"

namespace aquila {
namespace {

Packet C2(std::uint64_t seq, std::uint32_t bytes = 185) {
  return Packet{TrafficClass::kC2, seq, kSimStart, bytes, std::nullopt, {}};
}

Packet Video(std::uint64_t seq, std::uint32_t bytes = 1200, SimTime tx = kSimStart) {
  return Packet{TrafficClass::kVideo, seq, tx, bytes, std::nullopt, {}};
}

std::vector<std::pair<TrafficClass, std::uint64_t>> Ids(const std::vector<Dispatched>& out) {
  std::vector<std::pair<TrafficClass, std::uint64_t>> ids;
  for (const auto& d : out) ids.emplace_back(d.packet.cls, d.packet.seq);
  return ids;
}

TEST(SchedulerTest, C2AcceptedEvenWhenVideoQueueFull) {
  PriorityScheduler s(SchedulerConfig{.q_low_capacity_bytes = 2400});
  EXPECT_TRUE(s.Ingest(Video(0), kSimStart));
  EXPECT_TRUE(s.Ingest(Video(1), kSimStart));
  EXPECT_FALSE(s.Ingest(Video(2), kSimStart));
  EXPECT_EQ(s.counters(TrafficClass::kVideo).aqm_dropped, 1u);
  EXPECT_TRUE(s.Ingest(C2(0), kSimStart));
  EXPECT_EQ(s.high_size(), 1u);
}

TEST(SchedulerTest, EmptyVideoQueueAccepts) {
  PriorityScheduler s(SchedulerConfig{});
  EXPECT_TRUE(s.Ingest(Video(0), kSimStart));
}

TEST(SchedulerTest, HighServedToExhaustionFirst) {
  PriorityScheduler s(SchedulerConfig{});
  s.Ingest(Video(1), kSimStart);
  s.Ingest(C2(1), kSimStart);
  s.Ingest(C2(2), kSimStart);
  const auto out = s.Dispatch(kSimStart, 100'000);
  using P = std::pair<TrafficClass, std::uint64_t>;
  EXPECT_EQ(Ids(out), (std::vector<P>{{TrafficClass::kC2, 1},
                                      {TrafficClass::kC2, 2},
                                      {TrafficClass::kVideo, 1}}));
  EXPECT_EQ(out[0].channel, Channel::kReliableStream);
  EXPECT_EQ(out[2].channel, Channel::kUnreliableDatagram);
}

TEST(SchedulerTest, BudgetBoundsWholePackets) {
  PriorityScheduler s(SchedulerConfig{});
  s.Ingest(Video(1), kSimStart);
  s.Ingest(Video(2), kSimStart);
  const auto out = s.Dispatch(kSimStart, 1500);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].packet.seq, 1u);
  EXPECT_EQ(s.low_size(), 1u);
}

TEST(SchedulerTest, FifoKeepsArrivalOrder) {
  PriorityScheduler s(SchedulerConfig{.mode = SchedulerMode::kFifo});
  s.Ingest(Video(1), kSimStart);
  s.Ingest(C2(1), kSimStart);
  using P = std::pair<TrafficClass, std::uint64_t>;
  EXPECT_EQ(Ids(s.Dispatch(kSimStart, 100'000)),
            (std::vector<P>{{TrafficClass::kVideo, 1}, {TrafficClass::kC2, 1}}));
}

TEST(SchedulerTest, StaleVideoDroppedAtIngestAndAtHead) {
  PriorityScheduler s(SchedulerConfig{.stale_after = Millis(200)});
  EXPECT_FALSE(s.Ingest(Video(0, 1200, kSimStart), AtMillis(250)));
  EXPECT_TRUE(s.Ingest(Video(1, 1200, AtMillis(100)), AtMillis(150)));
  EXPECT_TRUE(s.Dispatch(AtMillis(400), 100'000).empty());
  EXPECT_EQ(s.counters(TrafficClass::kVideo).stale_dropped, 2u);
  EXPECT_EQ(s.low_occupancy_bytes(), 0u);
}

TEST(SchedulerTest, PacketCapIsIndependentOfSize) {
  PriorityScheduler s(SchedulerConfig{.q_low_capacity_bytes = 1'000'000,
                                      .q_low_capacity_packets = 2});
  EXPECT_TRUE(s.Ingest(Video(0, 60'000), kSimStart));
  EXPECT_TRUE(s.Ingest(Video(1, 10), kSimStart));
  EXPECT_FALSE(s.Ingest(Video(2, 10), kSimStart));
  s.Dispatch(kSimStart, 100'000);
  EXPECT_TRUE(s.Ingest(Video(3, 10), kSimStart));
}

TEST(SchedulerTest, ZeroSizePacketIsAContractViolation) {
  PriorityScheduler s(SchedulerConfig{});
  EXPECT_THROW(s.Ingest(C2(0, 0), kSimStart), ContractViolation);
}

TEST(SchedulerTest, ResidualService) {
  PriorityScheduler s(SchedulerConfig{});
  EXPECT_EQ(s.ResidualService(kSimStart), Duration::zero());
  // 1500 B on 1 Mbps is 12 ms of serialization.
  s.OnTransmissionStart(AtMillis(100), Millis(12));
  EXPECT_EQ(s.ResidualService(AtMillis(105)), Millis(7));
  EXPECT_EQ(s.ResidualService(AtMillis(112)), Duration::zero());
}

// Randomized ingestion and dispatch: no video leaves ahead of an already
// queued C2 packet and the byte budget is never exceeded.
TEST(SchedulerTest, StrictPriorityAndAqmBoundHoldForRandomArrivals) {
  std::mt19937_64 rng(11);
  PriorityScheduler s(SchedulerConfig{.q_low_capacity_bytes = 25'000, .stale_after = {}});
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<std::uint32_t> size(40, 1200);
  std::uint64_t c2_seq = 0;
  std::uint64_t v_seq = 0;
  for (int step = 0; step < 20'000; ++step) {
    const int r = pick(rng);
    if (r < 2) {
      s.Ingest(C2(c2_seq++), kSimStart);
    } else if (r < 8) {
      s.Ingest(Video(v_seq++, size(rng)), kSimStart);
    } else {
      const std::size_t queued_c2 = s.high_size();
      const auto out = s.Dispatch(kSimStart, size(rng) * 3);
      std::size_t c2_seen = 0;
      for (const auto& d : out) {
        if (d.packet.cls == TrafficClass::kC2) {
          ++c2_seen;
        } else {
          ASSERT_GE(c2_seen, queued_c2) << "video dispatched ahead of queued C2";
        }
      }
    }
    ASSERT_LE(s.low_occupancy_bytes(), 25'000u);
  }
  EXPECT_LE(s.peak_low_occupancy_bytes(), 25'000u);
}

}  // namespace
}  // namespace aquila
