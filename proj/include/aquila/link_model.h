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

#ifndef AQUILA_LINK_MODEL_H_
#define AQUILA_LINK_MODEL_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <istream>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "aquila/event_queue.h"
#include "aquila/packet.h"
#include "aquila/sim_time.h"

namespace aquila {

// Mahimahi-style delivery schedule: each entry is a millisecond offset at
// which one MTU worth of bytes may leave the bottleneck. Wraps with period
// equal to the last timestamp (at least 1 ms).
struct LinkTrace {
  std::vector<std::int64_t> opportunities_ms;
  std::uint32_t mtu_bytes = 1500;

  Duration period() const;
  // Absolute time of the k-th opportunity, counting across wraps.
  SimTime OpportunityTime(std::int64_t k) const;
  // Number of opportunities strictly before t.
  std::int64_t OpportunitiesBefore(SimTime t) const;
  double AverageBitsPerSecond() const;
};

// Throws TraceParseError naming the offending line.
LinkTrace LoadTrace(std::istream& source, std::uint32_t mtu_bytes = 1500);
LinkTrace LoadTraceFile(const std::string& path, std::uint32_t mtu_bytes = 1500);

struct RateStep {
  SimTime start;
  double bits_per_second = 0.0;
};

struct HandoverWindow {
  SimTime start;
  Duration t_phy{};
  SimTime end() const { return start + t_phy; }
};

struct LinkConfig {
  // Piecewise-constant rate (first step must start at 0) or a delivery trace.
  std::variant<std::vector<RateStep>, LinkTrace> capacity =
      std::vector<RateStep>{{kSimStart, 12e6}};
  Duration one_way_delay{};
  double loss_rate = 0.0;
  // 0 selects the default of 250 ms worth of the initial capacity.
  std::uint64_t queue_capacity_bytes = 0;
  std::uint32_t mtu_bytes = 1500;
  std::vector<HandoverWindow> handovers;
  std::uint64_t seed = 1;

  static LinkConfig Constant(double bits_per_second, Duration one_way_delay);
};

struct LinkCounters {
  std::uint64_t packets_in = 0;
  std::uint64_t delivered = 0;
  std::uint64_t tail_dropped = 0;
  std::uint64_t loss_dropped = 0;
  std::uint64_t blackout_dropped = 0;
  std::uint64_t bytes_delivered = 0;
  std::uint64_t reverse_sent = 0;
  std::uint64_t reverse_delivered = 0;
  std::uint64_t reverse_blackout_dropped = 0;
};

// The emulated bottleneck: bounded tail-drop FIFO, capacity C(t), fixed
// propagation delay, random loss at dequeue, and handover blackouts during
// which queued and in-flight frames are dropped. The reverse path is
// delay-only and shares the blackout schedule.
class Link {
 public:
  using DeliverFn = std::function<void(const TransportFrame&)>;
  using BlackoutFn = std::function<void(bool started, const HandoverWindow&)>;

  Link(EventQueue& events, LinkConfig config);
  Link(const Link&) = delete;
  Link& operator=(const Link&) = delete;

  void set_receiver(DeliverFn fn) { receiver_ = std::move(fn); }
  void set_idle_callback(std::function<void()> fn) { on_idle_ = std::move(fn); }
  void set_blackout_listener(BlackoutFn fn) { blackout_listener_ = std::move(fn); }

  // Returns false on tail drop or blackout drop. Oversized frames are a
  // contract violation (MTU misconfiguration upstream).
  bool Send(const TransportFrame& frame);

  // Schedules `on_arrival` one propagation delay from now unless a blackout
  // starts in between.
  void SendReverse(std::function<void()> on_arrival);

  double CapacityAt(SimTime t) const;

  // Throws ContractViolation if start < now or the window overlaps another.
  void InjectHandover(SimTime start, Duration t_phy);
  bool InBlackout(SimTime t) const;

  bool busy() const { return in_service_.has_value(); }
  Duration ResidualService(SimTime now) const;
  std::uint64_t occupancy_bytes() const { return occupancy_bytes_; }
  std::uint64_t queue_capacity_bytes() const { return queue_capacity_bytes_; }
  std::uint64_t queued_packets() const { return queue_.size(); }
  std::uint64_t in_transit() const { return in_transit_; }
  Duration one_way_delay() const { return config_.one_way_delay; }
  std::uint32_t mtu_bytes() const { return config_.mtu_bytes; }
  const LinkCounters& counters() const { return counters_; }
  const std::vector<HandoverWindow>& handovers() const { return handovers_; }

 private:
  struct InService {
    SimTime start;
    SimTime finish;
  };

  void StartService();
  void CompleteService();
  void BeginBlackout(const HandoverWindow& window);
  void EndBlackout(const HandoverWindow& window);
  SimTime ServiceEnd(SimTime start, std::uint32_t bytes);
  SimTime ServiceEndSteps(SimTime start, std::uint32_t bytes) const;
  SimTime ServiceEndTrace(SimTime start, std::uint32_t bytes);

  EventQueue& events_;
  LinkConfig config_;
  std::uint64_t queue_capacity_bytes_ = 0;
  std::mt19937_64 rng_;
  std::bernoulli_distribution loss_;

  std::deque<TransportFrame> queue_;
  std::uint64_t occupancy_bytes_ = 0;
  std::optional<InService> in_service_;
  EventQueue::Ticket service_ticket_;
  std::uint64_t in_transit_ = 0;
  std::uint32_t epoch_ = 0;

  // Trace cursor: next unused opportunity and bytes left over from the last
  // consumed one.
  std::int64_t next_opportunity_ = 0;
  std::uint32_t leftover_bytes_ = 0;
  SimTime leftover_at_{};

  std::vector<HandoverWindow> handovers_;
  LinkCounters counters_;
  DeliverFn receiver_;
  std::function<void()> on_idle_;
  BlackoutFn blackout_listener_;
};

}  // namespace aquila

#endif  // AQUILA_LINK_MODEL_H_
