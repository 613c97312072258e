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


#include "aquila/event_queue.h"

#include <vector>

#include <gtest/gtest.h>

#include "aquila/errors.h"

namespace aquila {
namespace {

using std::chrono::microseconds;

TEST(EventQueueTest, FiresAtScheduledTime) {
  EventQueue q;
  SimTime fired{};
  q.ScheduleAt(AtMicros(1000), ComponentId::kLink, EventKind::kDelivery,
               [&] { fired = q.now(); });
  q.RunUntil(AtMicros(2000));
  EXPECT_EQ(ToMicros(fired), 1000);
}

TEST(EventQueueTest, SimultaneousEventsRunInInsertionOrder) {
  EventQueue q;
  std::vector<int> order;
  for (int i = 0; i < 5; ++i) {
    q.ScheduleAt(AtMillis(3), ComponentId::kHarness, EventKind::kTimer,
                 [&order, i] { order.push_back(i); });
  }
  q.RunUntil(AtMillis(3));
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(EventQueueTest, EventAtNowPrecedesLaterEvents) {
  EventQueue q;
  std::vector<char> order;
  q.ScheduleAt(AtMillis(1), ComponentId::kHarness, EventKind::kTimer, [&] {
    q.ScheduleAt(AtMillis(2), ComponentId::kHarness, EventKind::kTimer,
                 [&] { order.push_back('b'); });
    q.ScheduleAt(q.now(), ComponentId::kHarness, EventKind::kTimer,
                 [&] { order.push_back('a'); });
  });
  q.RunUntil(AtMillis(5));
  EXPECT_EQ(order, (std::vector<char>{'a', 'b'}));
}

TEST(EventQueueTest, SchedulingInThePastIsRejected) {
  EventQueue q;
  q.RunUntil(AtMillis(10));
  EXPECT_THROW(q.ScheduleAt(AtMillis(5), ComponentId::kHarness, EventKind::kTimer, [] {}),
               ContractViolation);
}

TEST(EventQueueTest, HandlerSchedulingIntoThePastAbortsTheRun) {
  EventQueue q;
  q.ScheduleAt(AtMillis(10), ComponentId::kHarness, EventKind::kTimer, [&] {
    q.ScheduleAt(AtMillis(1), ComponentId::kHarness, EventKind::kTimer, [] {});
  });
  EXPECT_THROW(q.RunUntil(AtMillis(20)), SimulationAborted);
}

TEST(EventQueueTest, EmptyRunAdvancesClock) {
  EventQueue q;
  EXPECT_EQ(q.RunUntil(AtSeconds(5)), 0u);
  EXPECT_EQ(q.now(), AtSeconds(5));
}

TEST(EventQueueTest, RunUntilIncludesBoundaryOnly) {
  EventQueue q;
  for (int ms : {1, 2, 3}) {
    q.ScheduleAt(AtMillis(ms), ComponentId::kHarness, EventKind::kTimer, [] {});
  }
  EXPECT_EQ(q.RunUntil(AtMicros(2500)), 2u);
  EXPECT_EQ(q.pending(), 1u);
  EXPECT_EQ(q.RunUntil(AtMillis(3)), 1u);
}

TEST(EventQueueTest, RunUntilBackwardsIsRejected) {
  EventQueue q;
  q.RunUntil(AtMillis(4));
  EXPECT_THROW(q.RunUntil(AtMillis(3)), ContractViolation);
}

TEST(EventQueueTest, CancelSemantics) {
  EventQueue q;
  int fired = 0;
  auto a = q.ScheduleAt(AtMillis(1), ComponentId::kHarness, EventKind::kTimer, [&] { ++fired; });
  auto b = q.ScheduleAt(AtMillis(2), ComponentId::kHarness, EventKind::kTimer, [&] { ++fired; });
  EXPECT_TRUE(q.Cancel(a));
  EXPECT_FALSE(q.Cancel(a));
  q.RunUntil(AtMillis(3));
  EXPECT_EQ(fired, 1);
  EXPECT_FALSE(q.Cancel(b));
  EventQueue::Ticket none;
  EXPECT_FALSE(none.valid());
  EXPECT_FALSE(q.Cancel(none));
}

TEST(EventQueueTest, ClockNeverDecreasesInsideHandlers) {
  EventQueue q;
  SimTime last{};
  bool monotone = true;
  std::function<void()> step = [&] {
    monotone = monotone && q.now() >= last;
    last = q.now();
    if (q.now() < AtMillis(100)) {
      q.ScheduleIn(microseconds(q.dispatched() % 3 == 0 ? 0 : 700), ComponentId::kHarness,
                   EventKind::kTimer, step);
    }
  };
  q.ScheduleAt(kSimStart, ComponentId::kHarness, EventKind::kTimer, step);
  q.ScheduleAt(AtMillis(50), ComponentId::kHarness, EventKind::kTimer, step);
  q.RunUntil(AtMillis(200));
  EXPECT_TRUE(monotone);
}

}  // namespace
}  // namespace aquila
