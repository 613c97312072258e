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

#include <exception>
#include <string>

#include "aquila/errors.h"

namespace aquila {

std::string_view ToString(ComponentId id) {
  switch (id) {
    case ComponentId::kHarness: return "harness";
    case ComponentId::kLink: return "link";
    case ComponentId::kScheduler: return "scheduler";
    case ComponentId::kTransport: return "transport";
    case ComponentId::kTraffic: return "traffic";
    case ComponentId::kMetrics: return "metrics";
  }
  return "unknown";
}

std::string_view ToString(EventKind kind) {
  switch (kind) {
    case EventKind::kPacketArrival: return "packet-arrival";
    case EventKind::kDelivery: return "delivery";
    case EventKind::kAck: return "ack";
    case EventKind::kTimer: return "timer";
    case EventKind::kHandoverStart: return "handover-start";
    case EventKind::kHandoverEnd: return "handover-end";
  }
  return "unknown";
}

EventQueue::Ticket EventQueue::Schedule(Event e) {
  if (e.fire_at < now_) {
    throw ContractViolation(
        "event for " + std::string(ToString(e.target)) + "/" +
        std::string(ToString(e.kind)) + " scheduled at " +
        std::to_string(ToMicros(e.fire_at)) + "us, before now=" +
        std::to_string(ToMicros(now_)) + "us");
  }
  const Key key{e.fire_at, next_seq_++};
  pending_.emplace(key, Entry{e.target, e.kind, std::move(e.handler)});
  return Ticket(key.first, key.second);
}

bool EventQueue::Cancel(Ticket& ticket) {
  if (!ticket.valid()) return false;
  const bool erased = pending_.erase(Key{ticket.at_, ticket.seq_}) > 0;
  ticket = Ticket();
  return erased;
}

std::size_t EventQueue::RunUntil(SimTime t_end) {
  if (t_end < now_) {
    throw ContractViolation("RunUntil target " + std::to_string(ToMicros(t_end)) +
                            "us is before now=" + std::to_string(ToMicros(now_)) + "us");
  }
  std::size_t steps = 0;
  while (!pending_.empty()) {
    auto it = pending_.begin();
    if (it->first.first > t_end) break;
    now_ = it->first.first;
    Entry entry = std::move(it->second);
    pending_.erase(it);
    ++steps;
    ++dispatched_;
    try {
      entry.handler();
    } catch (const std::exception& ex) {
      throw SimulationAborted("run aborted at t=" + std::to_string(ToMicros(now_)) +
                              "us in " + std::string(ToString(entry.target)) + "/" +
                              std::string(ToString(entry.kind)) + " handler: " +
                              ex.what());
    }
  }
  now_ = t_end;
  return steps;
}

}  // namespace aquila
