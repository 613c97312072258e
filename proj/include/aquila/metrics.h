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

#ifndef AQUILA_METRICS_H_
#define AQUILA_METRICS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "aquila/packet.h"
#include "aquila/sim_time.h"

namespace aquila {

struct LatencyRecord {
  TrafficClass cls = TrafficClass::kC2;
  std::uint64_t seq = 0;
  SimTime t_tx{};
  SimTime t_rx{};
  std::uint32_t size_bytes = 0;

  Duration latency() const { return t_rx - t_tx; }
};

// PLR = 1 - M/N over unique sequence numbers.
class PlrAccumulator {
 public:
  void set_expected(std::uint64_t n) { expected_ = n; }
  // Returns false for a sequence number already counted.
  bool Record(std::uint64_t seq);

  std::uint64_t expected() const { return expected_; }
  std::uint64_t unique_received() const { return unique_; }
  std::uint64_t duplicates() const { return duplicates_; }
  // Empty when nothing was expected. Only sequence numbers below N count.
  std::optional<double> Plr() const;

 private:
  std::vector<bool> seen_;
  std::uint64_t expected_ = 0;
  std::uint64_t unique_ = 0;
  std::uint64_t duplicates_ = 0;
};

struct SummaryStats {
  std::uint64_t count = 0;
  double mean = 0;
  double stddev = 0;
  double p50 = 0;
  double p95 = 0;
  double p99 = 0;
  double max = 0;
};

SummaryStats Summarize(std::span<const double> values);

struct ThroughputSeries {
  Duration window{};
  std::vector<double> t_ms;  // window start
  std::vector<double> c2_bps;
  std::vector<double> video_bps;
  std::vector<double> capacity_bps;
};

// Receiver-side measurement: one latency record per delivered packet,
// frame-level video latency (last fragment), and C2 loss accounting.
class MetricsCollector {
 public:
  // Returns false for a duplicate (same class and seq), which is not
  // recorded again and is kept for replay audit. Throws ContractViolation if
  // now < p.tx_time.
  bool RecordRx(const Packet& p, SimTime now);

  const std::vector<LatencyRecord>& records() const { return records_; }
  const std::vector<LatencyRecord>& video_frames() const { return frames_; }
  const std::vector<LatencyRecord>& duplicates() const { return duplicates_; }
  PlrAccumulator& plr(TrafficClass cls) { return plr_[static_cast<std::size_t>(cls)]; }
  const PlrAccumulator& plr(TrafficClass cls) const {
    return plr_[static_cast<std::size_t>(cls)];
  }

  // Latencies in milliseconds, optionally restricted to tx_time in [from, to).
  std::vector<double> LatenciesMs(TrafficClass cls, SimTime from = SimTime::min(),
                                  SimTime to = SimTime::max()) const;
  std::vector<double> FrameLatenciesMs() const;

  // Delivered bits per second per class, binned by receive time, with the
  // link capacity sampled at each window start.
  ThroughputSeries Throughput(Duration window, SimTime end,
                              const std::function<double(SimTime)>& capacity_at) const;

 private:
  struct FrameProgress {
    std::uint16_t received = 0;
    std::uint16_t count = 0;
    SimTime t_tx{};
    std::uint32_t bytes = 0;
  };

  std::vector<LatencyRecord> records_;
  std::vector<LatencyRecord> frames_;
  std::vector<LatencyRecord> duplicates_;
  std::array<PlrAccumulator, 2> plr_{};
  std::map<std::uint64_t, FrameProgress> pending_frames_;
};

}  // namespace aquila

#endif  // AQUILA_METRICS_H_
