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

#ifndef AQUILA_EXPERIMENTS_H_
#define AQUILA_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aquila/link_model.h"
#include "aquila/metrics.h"
#include "aquila/scenario.h"
#include "aquila/scheduler.h"
#include "aquila/transport.h"

namespace aquila {

struct TimeSeries {
  std::string id;
  std::vector<double> t_ms;
  std::vector<double> value;

  void Add(double t, double v) {
    t_ms.push_back(t);
    value.push_back(v);
  }
};

// Collects invariant breaches observed during a run.
class InvariantMonitor {
 public:
  void Check(bool ok, SimTime at, std::string_view what);
  bool ok() const { return violations_.empty(); }
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
  std::size_t suppressed_ = 0;
};

struct StreamRunResult {
  std::string label;
  ScenarioConfig config;
  SimTime end{};
  MetricsCollector metrics;
  // Sampled every 100 ms: cwnd_bytes, queue_delay_ms, target_delay_ms,
  // encoder_rate_bps, transmit_rate_bps, bytes_in_flight, capacity_bps,
  // link_queue_bytes, c2_credits_bytes.
  std::vector<TimeSeries> series;
  std::vector<BlackoutReport> blackouts;
  SenderStats sender;
  ReceiverStats receiver;
  LinkCounters link;
  ClassCounters scheduler_c2;
  ClassCounters scheduler_video;
  std::uint64_t c2_emitted = 0;
  std::uint64_t video_frames = 0;
  std::uint64_t video_bytes = 0;
  std::vector<std::uint64_t> accepted_commands;
  std::vector<std::string> violations;

  const TimeSeries* Find(std::string_view id) const;
};

inline constexpr Duration kTickInterval = std::chrono::milliseconds(100);

// Sources, scheduler, transport, link and receiver wired on one event queue.
StreamRunResult RunStream(const ScenarioConfig& config, std::string label);

// Delivered bits per second binned by transmit time, one value per window
// starting at 0 and ending before `end`.
std::vector<double> DeliveredRateByTx(const MetricsCollector& metrics, TrafficClass cls,
                                      Duration window, SimTime end);

// Mean of a tick series over [from, to).
std::optional<double> SeriesMean(const TimeSeries& series, SimTime from, SimTime to);

struct SweepArmResult {
  SchedulerMode mode = SchedulerMode::kStrictPriority;
  double lambda_vid = 0;
  std::optional<double> mean_wait_ms;  // C2 arrival to start of service
  std::uint64_t c2_samples = 0;
  double mean_residual_ms = 0;  // residual service seen by arriving C2
  double busy_fraction = 0;
  std::uint64_t video_dropped = 0;
  std::vector<std::string> violations;
};

// One arm of the C2 waiting-time experiment: Poisson C2 and video arrivals
// with exponential sizes, a constant-rate link fed one packet at a time
// whenever it goes idle.
SweepArmResult RunSweepArm(const ScenarioConfig& config, double lambda_vid, SchedulerMode mode);

struct SweepPoint {
  double load_factor = 0;
  double lambda_vid = 0;
  SweepArmResult strict;
  SweepArmResult fifo;
  std::optional<double> oracle_wait_ms;
  std::uint64_t oracle_samples = 0;
  double prediction_ms = 0;  // closed form with the measured residual
};

std::vector<SweepPoint> RunPrioritySweep(const ScenarioConfig& config);

}  // namespace aquila

#endif  // AQUILA_EXPERIMENTS_H_
