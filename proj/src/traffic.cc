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

#include "aquila/traffic.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "aquila/errors.h"

namespace aquila {
namespace {

SimTime NthEmission(SimTime start, std::uint64_t k, double rate_hz) {
  return start + Duration{std::llround(static_cast<double>(k) * 1e6 / rate_hz)};
}

}  // namespace

C2Source::C2Source(C2SourceConfig config, SimTime start) : config_(config), start_(start) {
  if (config_.rate_hz <= 0) throw ContractViolation("c2 rate must be positive");
  if (config_.payload_bytes == 0) throw ContractViolation("c2 payload must be positive");
}

SimTime C2Source::next_emission() const {
  return NthEmission(start_, next_seq_, config_.rate_hz);
}

std::vector<Packet> C2Source::Tick(SimTime now) {
  std::vector<Packet> out;
  while (next_emission() <= now) {
    Packet p;
    p.cls = TrafficClass::kC2;
    p.seq = next_seq_;
    p.tx_time = next_emission();
    p.size_bytes = config_.payload_bytes;
    out.push_back(p);
    ++next_seq_;
  }
  return out;
}

VideoSource::VideoSource(VideoSourceConfig config, SimTime start)
    : config_(config), start_(start), rng_(config.seed) {
  if (config_.fps <= 0) throw ContractViolation("video fps must be positive");
  if (config_.jitter < 0 || config_.jitter >= 1) throw ContractViolation("jitter must lie in [0,1)");
  if (config_.rate_control_s < 0) throw ContractViolation("rate control horizon must be >= 0");
  if (config_.max_datagram_size == 0) throw ContractViolation("max datagram size must be positive");
  if (config_.r_min_bps > config_.r_max_bps) throw ContractViolation("r_min exceeds r_max");
  target_bps_ = std::clamp(config_.initial_bitrate_bps, config_.r_min_bps, config_.r_max_bps);
  pending_bps_ = target_bps_;
}

SimTime VideoSource::next_emission() const {
  return NthEmission(start_, next_frame_, config_.fps);
}

void VideoSource::ApplyRate(double bits_per_second) {
  if (!(bits_per_second >= config_.r_min_bps && bits_per_second <= config_.r_max_bps)) {
    throw ContractViolation("encoder rate " + std::to_string(bits_per_second) +
                            " outside [r_min, r_max]");
  }
  pending_bps_ = bits_per_second;
}

std::vector<Packet> VideoSource::Tick(SimTime now) {
  std::vector<Packet> out;
  std::uniform_real_distribution<double> jitter(-config_.jitter, config_.jitter);
  while (next_emission() <= now) {
    target_bps_ = pending_bps_;
    const SimTime tx = next_emission();
    double factor = 1.0;
    if (config_.jitter > 0) factor += jitter(rng_);
    double payback = 0.0;
    if (config_.rate_control_s > 0) {
      payback = size_error_bytes_ / std::max(1.0, config_.rate_control_s * config_.fps);
    }
    const auto frame_bytes =
        std::max<std::uint64_t>(1, std::llround(mean_frame_bytes() * factor - payback));
    size_error_bytes_ += static_cast<double>(frame_bytes) - mean_frame_bytes();
    const std::uint64_t mds = config_.max_datagram_size;
    const auto count = static_cast<std::uint16_t>((frame_bytes + mds - 1) / mds);
    std::uint64_t left = frame_bytes;
    for (std::uint16_t i = 0; i < count; ++i) {
      Packet p;
      p.cls = TrafficClass::kVideo;
      p.seq = next_seq_++;
      p.tx_time = tx;
      p.size_bytes = static_cast<std::uint32_t>(std::min(left, mds));
      p.deadline_age = config_.deadline_age;
      p.frame = FrameInfo{next_frame_, i, count};
      left -= p.size_bytes;
      out.push_back(p);
    }
    bytes_emitted_ += frame_bytes;
    ++next_frame_;
  }
  return out;
}

}  // namespace aquila
