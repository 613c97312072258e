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

#ifndef AQUILA_SCHEDULER_H_
#define AQUILA_SCHEDULER_H_

#include <array>
#include <concepts>
#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "aquila/packet.h"
#include "aquila/sim_time.h"

namespace aquila {

enum class SchedulerMode : std::uint8_t { kStrictPriority, kFifo };

std::string_view ToString(SchedulerMode mode);

struct SchedulerConfig {
  SchedulerMode mode = SchedulerMode::kStrictPriority;
  // Video byte budget of the low-priority queue (also the video cap of the
  // shared queue in FIFO mode).
  std::uint64_t q_low_capacity_bytes = 25'000;
  // Optional packet-count limit on the same queue. Unlike the byte budget it
  // admits video independently of packet size.
  std::optional<std::uint64_t> q_low_capacity_packets;
  // Video older than this at ingestion or dispatch is discarded.
  std::optional<Duration> stale_after = std::chrono::milliseconds(200);
};

struct ClassCounters {
  std::uint64_t ingested = 0;
  std::uint64_t dispatched = 0;
  std::uint64_t aqm_dropped = 0;
  std::uint64_t stale_dropped = 0;
};

struct Dispatched {
  Packet packet;
  Channel channel;
};

// Channel a class maps to: C2 rides the reliable stream, video the datagram
// channel.
constexpr Channel ChannelFor(TrafficClass cls) {
  return cls == TrafficClass::kC2 ? Channel::kReliableStream : Channel::kUnreliableDatagram;
}

// Two-queue ingestion with AQM on the video queue and non-preemptive
// strict-priority dispatch. FIFO mode keeps a single arrival-ordered queue
// as the coupled baseline.
class PriorityScheduler {
 public:
  explicit PriorityScheduler(SchedulerConfig config);

  // C2 is always accepted. Video is dropped when it would overflow the
  // low-priority queue budget or is already stale.
  bool Ingest(const Packet& p, SimTime now);

  // Emits packets in service order while `admit(packet)` returns true. The
  // first refused packet stays queued and ends the round (no skipping).
  template <std::predicate<const Packet&> Admit>
  std::vector<Dispatched> Dispatch(SimTime now, Admit&& admit);

  // Byte-budget form: whole packets only, stops at the first that does not fit.
  std::vector<Dispatched> Dispatch(SimTime now, std::uint64_t budget_bytes);

  // Bookkeeping for the residual service term: the caller reports when a
  // packet starts occupying the bottleneck and for how long.
  void OnTransmissionStart(SimTime start, Duration serialization);
  Duration ResidualService(SimTime now) const;

  bool empty() const { return high_.empty() && low_.empty() && fifo_.empty(); }
  std::size_t high_size() const { return high_.size(); }
  std::size_t low_size() const { return mode() == SchedulerMode::kFifo ? fifo_.size() : low_.size(); }
  std::uint64_t low_occupancy_bytes() const { return low_bytes_; }
  std::uint64_t peak_low_occupancy_bytes() const { return peak_low_bytes_; }
  SchedulerMode mode() const { return config_.mode; }
  const SchedulerConfig& config() const { return config_; }
  const ClassCounters& counters(TrafficClass cls) const {
    return counters_[static_cast<std::size_t>(cls)];
  }

 private:
  bool IsStale(const Packet& p, SimTime now) const;
  const Packet* Head(SimTime now);
  void PopHead();
  ClassCounters& mutable_counters(TrafficClass cls) {
    return counters_[static_cast<std::size_t>(cls)];
  }

  SchedulerConfig config_;
  std::deque<Packet> high_;
  std::deque<Packet> low_;
  std::deque<Packet> fifo_;
  std::uint64_t low_bytes_ = 0;
  std::uint64_t low_packets_ = 0;
  std::uint64_t peak_low_bytes_ = 0;
  std::array<ClassCounters, 2> counters_{};
  SimTime service_end_{};
};

template <std::predicate<const Packet&> Admit>
std::vector<Dispatched> PriorityScheduler::Dispatch(SimTime now, Admit&& admit) {
  std::vector<Dispatched> out;
  while (const Packet* head = Head(now)) {
    if (!admit(*head)) break;
    out.push_back(Dispatched{*head, ChannelFor(head->cls)});
    ++mutable_counters(head->cls).dispatched;
    PopHead();
  }
  return out;
}

}  // namespace aquila

#endif  // AQUILA_SCHEDULER_H_
