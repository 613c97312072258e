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

#include <algorithm>

#include "aquila/errors.h"

namespace aquila {

std::string_view ToString(SchedulerMode mode) {
  return mode == SchedulerMode::kFifo ? "fifo" : "strict_priority";
}

PriorityScheduler::PriorityScheduler(SchedulerConfig config) : config_(config) {
  if (config_.q_low_capacity_bytes == 0) {
    throw ContractViolation("q_low capacity must be positive");
  }
  if (config_.q_low_capacity_packets && *config_.q_low_capacity_packets == 0) {
    throw ContractViolation("q_low packet capacity must be positive");
  }
}

bool PriorityScheduler::IsStale(const Packet& p, SimTime now) const {
  const std::optional<Duration> limit = p.deadline_age ? p.deadline_age : config_.stale_after;
  return limit && now - p.tx_time > *limit;
}

bool PriorityScheduler::Ingest(const Packet& p, SimTime now) {
  if (p.size_bytes == 0) throw ContractViolation("packet size must be positive");
  auto& c = mutable_counters(p.cls);
  ++c.ingested;
  switch (p.cls) {
    case TrafficClass::kC2:
      (config_.mode == SchedulerMode::kFifo ? fifo_ : high_).push_back(p);
      return true;
    case TrafficClass::kVideo:
      if (IsStale(p, now)) {
        ++c.stale_dropped;
        return false;
      }
      if (low_bytes_ + p.size_bytes > config_.q_low_capacity_bytes ||
          (config_.q_low_capacity_packets && low_packets_ >= *config_.q_low_capacity_packets)) {
        ++c.aqm_dropped;
        return false;
      }
      (config_.mode == SchedulerMode::kFifo ? fifo_ : low_).push_back(p);
      low_bytes_ += p.size_bytes;
      ++low_packets_;
      peak_low_bytes_ = std::max(peak_low_bytes_, low_bytes_);
      return true;
  }
  throw ContractViolation("unknown traffic class");
}

const Packet* PriorityScheduler::Head(SimTime now) {
  // Stale video is shed at the head before it can consume budget.
  auto shed = [&](std::deque<Packet>& q) {
    while (!q.empty() && q.front().cls == TrafficClass::kVideo && IsStale(q.front(), now)) {
      low_bytes_ -= q.front().size_bytes;
      --low_packets_;
      ++mutable_counters(TrafficClass::kVideo).stale_dropped;
      q.pop_front();
    }
  };
  if (config_.mode == SchedulerMode::kFifo) {
    shed(fifo_);
    return fifo_.empty() ? nullptr : &fifo_.front();
  }
  if (!high_.empty()) return &high_.front();
  shed(low_);
  return low_.empty() ? nullptr : &low_.front();
}

void PriorityScheduler::PopHead() {
  std::deque<Packet>* q = nullptr;
  if (config_.mode == SchedulerMode::kFifo) {
    q = &fifo_;
  } else {
    q = high_.empty() ? &low_ : &high_;
  }
  if (q->front().cls == TrafficClass::kVideo) {
    low_bytes_ -= q->front().size_bytes;
    --low_packets_;
  }
  q->pop_front();
}

std::vector<Dispatched> PriorityScheduler::Dispatch(SimTime now, std::uint64_t budget_bytes) {
  return Dispatch(now, [&budget_bytes](const Packet& p) {
    if (p.size_bytes > budget_bytes) return false;
    budget_bytes -= p.size_bytes;
    return true;
  });
}

void PriorityScheduler::OnTransmissionStart(SimTime start, Duration serialization) {
  service_end_ = start + serialization;
}

Duration PriorityScheduler::ResidualService(SimTime now) const {
  return service_end_ > now ? service_end_ - now : Duration::zero();
}

}  // namespace aquila
