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

#include "aquila/congestion.h"

#include <algorithm>

#include "aquila/errors.h"

namespace aquila {

void WindowedMin::Push(SimTime t, Duration value) {
  while (!samples_.empty() && samples_.back().second >= value) samples_.pop_back();
  samples_.emplace_back(t, value);
  while (samples_.front().first < t - window_) samples_.pop_front();
}

std::optional<Duration> WindowedMin::Min(SimTime now) const {
  // Times and values both increase along the deque, so the first live
  // sample is the minimum.
  for (const auto& [t, v] : samples_) {
    if (t >= now - window_) return v;
  }
  return std::nullopt;
}

double EncoderRate(const RateCouplerConfig& c, double r_tx_bps) {
  return std::max(c.r_min_bps, std::min(c.r_max_bps, c.gamma * (r_tx_bps - c.r_safe_bps)));
}

ScreamFpvController::ScreamFpvController(CcaConfig config)
    : config_(config),
      rtt_window_(config.window),
      delivery_rate_bps_(config.initial_rate_bps),
      r_tx_bps_(config.initial_rate_bps) {
  if (config_.kappa < 1.0) throw ContractViolation("kappa must be >= 1");
  if (config_.beta <= 0.0 || config_.beta >= 1.0) throw ContractViolation("beta must lie in (0,1)");
  const auto& c = config_.coupler;
  if (c.gamma <= 0.0 || c.gamma > 1.0) throw ContractViolation("gamma must lie in (0,1]");
  if (c.r_min_bps > c.r_max_bps) throw ContractViolation("r_min must not exceed r_max");
  if (c.r_safe_bps < 0.0) throw ContractViolation("r_safe must be non-negative");
  if (config_.packet_size == 0) throw ContractViolation("packet size must be positive");
  if (config_.delivery_rate_gain <= 0.0 || config_.delivery_rate_gain > 1.0) {
    throw ContractViolation("delivery rate gain must lie in (0,1]");
  }
  if (config_.rate_probe_gain < 0.0) throw ContractViolation("rate probe gain must be >= 0");
  if (config_.rate_drain_gain < 0.0 || config_.rate_drain_gain >= 1.0) {
    throw ContractViolation("rate drain gain must lie in [0,1)");
  }
  const double s = config_.packet_size;
  cwnd_min_ = config_.cwnd_min_bytes > 0 ? std::max(config_.cwnd_min_bytes, 2 * s) : 2 * s;
  cwnd_ = config_.initial_cwnd_bytes > 0 ? config_.initial_cwnd_bytes : 10 * s;
  cwnd_ = std::max(cwnd_, cwnd_min_);
  cwnd_ref_ = cwnd_;
}

void ScreamFpvController::OnPacketSent(std::uint32_t bytes) {
  bytes_in_flight_ += bytes;
  sent_since_accrual_ += bytes;
}

void ScreamFpvController::OnPacketLost(std::uint32_t bytes) {
  bytes_in_flight_ -= std::min<std::uint64_t>(bytes, bytes_in_flight_);
}

void ScreamFpvController::OnAck(Duration rtt_sample, std::uint32_t bytes_acked, SimTime now) {
  if (rtt_sample <= Duration::zero()) throw ContractViolation("rtt sample must be positive");
  if (!srtt_) {
    srtt_ = rtt_sample;
  } else {
    const double next = static_cast<double>(srtt_->count()) +
                        config_.srtt_gain * static_cast<double>((rtt_sample - *srtt_).count());
    srtt_ = Duration{static_cast<std::int64_t>(next + 0.5)};
  }
  rtt_window_.Push(now, *srtt_);
  SampleDeliveryRate(bytes_acked, now);

  const std::uint64_t flight_before = bytes_in_flight_;
  bytes_in_flight_ -= std::min<std::uint64_t>(bytes_acked, bytes_in_flight_);

  const Duration dq = *QueueDelayEstimate(now);
  const Duration target = *TargetDelay(now);
  if (dq <= target) {
    if (static_cast<double>(flight_before) >= config_.growth_flight_ratio * cwnd_) {
      Increase(bytes_acked);
    }
  } else if (now >= decrease_hold_until_) {
    // One proportional reduction per smoothed RTT.
    const double excess = static_cast<double>((dq - target).count()) /
                          static_cast<double>(dq.count());
    cwnd_ = std::max(cwnd_min_, cwnd_ * (1.0 - config_.beta * excess));
    cwnd_ref_ = cwnd_;
    acked_in_epoch_ = 0.0;
    decrease_hold_until_ = now + *srtt_;
  }
  RefreshTransmitRate(now);
}

void ScreamFpvController::SampleDeliveryRate(std::uint32_t bytes_acked, SimTime now) {
  if (!rate_interval_start_) {
    rate_interval_start_ = now;
    rate_interval_bytes_ = 0.0;
    return;
  }
  rate_interval_bytes_ += bytes_acked;
  const Duration elapsed = now - *rate_interval_start_;
  if (elapsed < *srtt_ || elapsed <= Duration::zero()) return;
  const double sample = rate_interval_bytes_ * 8.0 / ToSeconds(elapsed);
  // With a standing queue the ACK clock runs at the bottleneck rate, so the
  // sample is a capacity measurement and replaces the average outright.
  const auto dq = QueueDelayEstimate(now);
  const auto target = TargetDelay(now);
  const bool queue_standing =
      dq && target && ToSeconds(*dq) > config_.probe_queue_fraction * ToSeconds(*target);
  const double gain = queue_standing ? 1.0 : config_.delivery_rate_gain;
  delivery_rate_bps_ += gain * (sample - delivery_rate_bps_);
  rate_interval_start_ = now;
  rate_interval_bytes_ = 0.0;
}

void ScreamFpvController::Increase(std::uint32_t bytes_acked) {
  // S * acked / cwnd per ACK against the window at the start of the current
  // growth epoch, so one full window of ACKs adds exactly S.
  double remaining = bytes_acked;
  const double s = config_.packet_size;
  while (remaining > 0.0) {
    const double take = std::min(remaining, cwnd_ref_ - acked_in_epoch_);
    cwnd_ += s * take / cwnd_ref_;
    acked_in_epoch_ += take;
    remaining -= take;
    if (acked_in_epoch_ >= cwnd_ref_) {
      cwnd_ref_ = cwnd_;
      acked_in_epoch_ = 0.0;
    }
  }
}

void ScreamFpvController::RefreshTransmitRate(SimTime now) {
  if (!srtt_ || srtt_->count() <= 0) return;
  const double window_rate = cwnd_ * 8.0 / ToSeconds(*srtt_);
  double delivery = delivery_rate_bps_;
  const auto dq = QueueDelayEstimate(now);
  const auto target = TargetDelay(now);
  if (dq && target) {
    const double threshold = config_.probe_queue_fraction * ToSeconds(*target);
    const double q = ToSeconds(*dq);
    if (q <= threshold) {
      // Tapers to no probing at the threshold so the rate is continuous in q.
      delivery *= 1.0 + config_.rate_probe_gain * (1.0 - q / threshold);
    } else {
      delivery *= 1.0 - config_.rate_drain_gain * (q - threshold) / q;
    }
  }
  r_tx_bps_ = std::min(window_rate, delivery);
}

std::optional<Duration> ScreamFpvController::QueueDelayEstimate(SimTime now) const {
  const auto floor = rtt_window_.Min(now);
  if (!floor || !srtt_) return std::nullopt;
  return std::max(Duration::zero(), *srtt_ - *floor);
}

std::optional<Duration> ScreamFpvController::TargetDelay(SimTime now) const {
  const auto floor = rtt_window_.Min(now);
  if (!floor) return std::nullopt;
  const auto scaled = Duration{static_cast<std::int64_t>(
      config_.kappa * static_cast<double>(floor->count()) + 0.5)};
  return std::max(config_.d_base, scaled);
}

double ScreamFpvController::EncoderRate() const {
  return aquila::EncoderRate(config_.coupler, r_tx_bps_);
}

double ScreamFpvController::credit_cap_bytes() const {
  return config_.credit_cap_bytes > 0 ? config_.credit_cap_bytes : cwnd_;
}

SendDecision ScreamFpvController::CanSend(std::uint32_t size, TrafficClass cls) {
  if (static_cast<double>(bytes_in_flight_ + size) <= cwnd_) return SendDecision::kSend;
  if (cls == TrafficClass::kC2 && credits_ >= size) {
    credits_ -= size;
    return SendDecision::kSendViaCredit;
  }
  return SendDecision::kBlocked;
}

void ScreamFpvController::AccrueCredit(SimTime now) {
  if (last_accrual_ && srtt_ && now > *last_accrual_) {
    const double allowed = cwnd_ * ToSeconds(now - *last_accrual_) / ToSeconds(*srtt_);
    const double unused = allowed - static_cast<double>(sent_since_accrual_);
    if (unused > 0) credits_ = std::min(credit_cap_bytes(), credits_ + unused);
  }
  credits_ = std::min(credits_, credit_cap_bytes());
  last_accrual_ = now;
  sent_since_accrual_ = 0;
}

void ScreamFpvController::set_cwnd_bytes(double cwnd) {
  cwnd_ = std::max(cwnd, cwnd_min_);
  cwnd_ref_ = cwnd_;
  acked_in_epoch_ = 0.0;
}

void ScreamFpvController::set_credits_bytes(double credits) {
  credits_ = std::clamp(credits, 0.0, credit_cap_bytes());
}

}  // namespace aquila
