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

#ifndef AQUILA_EVENT_QUEUE_H_
#define AQUILA_EVENT_QUEUE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string_view>
#include <utility>

#include "aquila/sim_time.h"

namespace aquila {

enum class ComponentId : std::uint8_t {
  kHarness,
  kLink,
  kScheduler,
  kTransport,
  kTraffic,
  kMetrics,
};

enum class EventKind : std::uint8_t {
  kPacketArrival,
  kDelivery,
  kAck,
  kTimer,
  kHandoverStart,
  kHandoverEnd,
};

std::string_view ToString(ComponentId id);
std::string_view ToString(EventKind kind);

struct Event {
  SimTime fire_at;
  ComponentId target = ComponentId::kHarness;
  EventKind kind = EventKind::kTimer;
  std::function<void()> handler;
};

// Discrete-event core. Owns virtual time; dispatches events in (fire_at,
// insertion order). Single-threaded: handlers run inline from RunUntil().
class EventQueue {
 public:
  // Opaque handle for Cancel(). Default-constructed tickets never match.
  class Ticket {
   public:
    Ticket() = default;
    bool valid() const { return seq_ != 0; }

   private:
    friend class EventQueue;
    Ticket(SimTime at, std::uint64_t seq) : at_(at), seq_(seq) {}
    SimTime at_{};
    std::uint64_t seq_ = 0;
  };

  EventQueue() = default;
  EventQueue(const EventQueue&) = delete;
  EventQueue& operator=(const EventQueue&) = delete;

  SimTime now() const { return now_; }
  std::size_t pending() const { return pending_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }

  // Throws ContractViolation if e.fire_at < now().
  Ticket Schedule(Event e);
  Ticket ScheduleAt(SimTime at, ComponentId target, EventKind kind,
                    std::function<void()> handler) {
    return Schedule(Event{at, target, kind, std::move(handler)});
  }
  Ticket ScheduleIn(Duration delay, ComponentId target, EventKind kind,
                    std::function<void()> handler) {
    return Schedule(Event{now_ + delay, target, kind, std::move(handler)});
  }

  // Returns true if the event was still pending. Idempotent.
  bool Cancel(Ticket& ticket);

  // Dispatches every event with fire_at <= t_end, then sets now() = t_end.
  // Exceptions escaping a handler abort the run as SimulationAborted.
  std::size_t RunUntil(SimTime t_end);

 private:
  using Key = std::pair<SimTime, std::uint64_t>;
  struct Entry {
    ComponentId target;
    EventKind kind;
    std::function<void()> handler;
  };

  SimTime now_{};
  std::uint64_t next_seq_ = 1;
  std::uint64_t dispatched_ = 0;
  std::map<Key, Entry> pending_;
};

}  // namespace aquila

#endif  // AQUILA_EVENT_QUEUE_H_
