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

#ifndef AQUILA_CONGESTION_H_
#define AQUILA_CONGESTION_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <utility>

#include "aquila/packet.h"
#include "aquila/sim_time.h"

namespace aquila {

// Exact sliding-window minimum over (time, value) samples using a monotonic
// deque. A sample is retained while its age is at most `window`.
class WindowedMin {
 public:
  explicit WindowedMin(Duration window) : window_(window) {}

  void Push(SimTime t, Duration value);
  std::optional<Duration> Min(SimTime now) const;
  Duration window() const { return window_; }
  std::size_t size() const { return samples_.size(); }

 private:
  Duration window_;
  std::deque<std::pair<SimTime, Duration>> samples_;
};

struct RateCouplerConfig {
  double r_safe_bps = 15e3;
  double gamma = 0.9;
  double r_min_bps = 300e3;
  double r_max_bps = 10e6;
};

struct CcaConfig {
  Duration window = std::chrono::seconds(20);
  double kappa = 1.5;
  double beta = 0.5;
  Duration d_base = std::chrono::milliseconds(40);
  std::uint32_t packet_size = 1200;
  double srtt_gain = 1.0 / 8.0;
  // 0 selects 10 packets.
  double initial_cwnd_bytes = 0.0;
  // 0 selects 2 packets.
  double cwnd_min_bytes = 0.0;
  // 0 ties the cap to the current cwnd.
  double credit_cap_bytes = 0.0;
  // Additive growth only while bytes in flight reach this share of cwnd.
  double growth_flight_ratio = 2.0 / 3.0;
  // Delivery-rate estimate before the first measurement interval closes.
  double initial_rate_bps = 1e6;
  // EWMA gain of the per-srtt delivery-rate samples.
  double delivery_rate_gain = 0.25;
  // While the queue estimate stays below probe_queue_fraction * d_target the
  // transmit rate may exceed the measured delivery rate by up to this
  // fraction (full at an empty queue, none at the threshold), so an
  // app-limited encoder can still discover spare capacity.
  double rate_probe_gain = 0.25;
  double probe_queue_fraction = 0.25;
  // Above that threshold the rate is scaled by 1 - rate_drain_gain *
  // (d_q - threshold) / d_q so a standing queue drains instead of persisting
  // at d_target.
  double rate_drain_gain = 0.5;
  RateCouplerConfig coupler;
};

enum class SendDecision : std::uint8_t { kSend, kSendViaCredit, kBlocked };

// Delay-driven window controller with an adaptive queue-delay target,
// telemetry headroom reservation for the encoder rate, and a credit pool
// that lets C2 bypass a full window.
class ScreamFpvController {
 public:
  explicit ScreamFpvController(CcaConfig config);

  void OnPacketSent(std::uint32_t bytes);
  // Removes bytes from flight without touching cwnd (no loss-based reaction).
  void OnPacketLost(std::uint32_t bytes);
  void OnAck(Duration rtt_sample, std::uint32_t bytes_acked, SimTime now);

  // srtt minus the windowed minimum of srtt; empty before the first sample.
  std::optional<Duration> QueueDelayEstimate(SimTime now) const;
  // max(d_base, kappa * windowed minimum); empty before the first sample.
  std::optional<Duration> TargetDelay(SimTime now) const;

  // max(r_min, min(r_max, gamma * (r_tx - r_safe)))
  double EncoderRate() const;
  // min(cwnd / srtt, delivery rate scaled by the queue state)
  double TransmitRateEstimate() const { return r_tx_bps_; }
  double DeliveryRateEstimate() const { return delivery_rate_bps_; }

  SendDecision CanSend(std::uint32_t size, TrafficClass cls);
  void AccrueCredit(SimTime now);

  double cwnd_bytes() const { return cwnd_; }
  double cwnd_min_bytes() const { return cwnd_min_; }
  double credit_cap_bytes() const;
  double credits_bytes() const { return credits_; }
  std::uint64_t bytes_in_flight() const { return bytes_in_flight_; }
  std::optional<Duration> srtt() const { return srtt_; }
  const CcaConfig& config() const { return config_; }

  // Direct state access for harnesses that drive the controller open-loop.
  void set_cwnd_bytes(double cwnd);
  void set_credits_bytes(double credits);

 private:
  void Increase(std::uint32_t bytes_acked);
  void SampleDeliveryRate(std::uint32_t bytes_acked, SimTime now);
  void RefreshTransmitRate(SimTime now);

  CcaConfig config_;
  double cwnd_;
  double cwnd_min_;
  double cwnd_ref_;
  double acked_in_epoch_ = 0.0;
  SimTime decrease_hold_until_{};
  std::optional<Duration> srtt_;
  WindowedMin rtt_window_;
  std::uint64_t bytes_in_flight_ = 0;
  double credits_ = 0.0;
  std::optional<SimTime> last_accrual_;
  std::uint64_t sent_since_accrual_ = 0;
  double delivery_rate_bps_;
  std::optional<SimTime> rate_interval_start_;
  double rate_interval_bytes_ = 0.0;
  double r_tx_bps_;
};

double EncoderRate(const RateCouplerConfig& coupler, double r_tx_bps);

}  // namespace aquila

#endif  // AQUILA_CONGESTION_H_
