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

#ifndef AQUILA_TRAFFIC_H_
#define AQUILA_TRAFFIC_H_

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "aquila/packet.h"
#include "aquila/sim_time.h"

namespace aquila {

struct C2SourceConfig {
  double rate_hz = 10.0;
  // 185 B at 10 Hz is ~15 kbps of MAVLink telemetry.
  std::uint32_t payload_bytes = 185;
};

// Constant-rate command/telemetry generator with no emission jitter.
class C2Source {
 public:
  explicit C2Source(C2SourceConfig config, SimTime start = kSimStart);

  SimTime next_emission() const;
  // Every packet due at or before `now`, seq and tx_time stamped.
  std::vector<Packet> Tick(SimTime now);
  std::uint64_t emitted() const { return next_seq_; }
  const C2SourceConfig& config() const { return config_; }

 private:
  C2SourceConfig config_;
  SimTime start_;
  std::uint64_t next_seq_ = 0;
};

struct VideoSourceConfig {
  double fps = 30.0;
  double initial_bitrate_bps = 3e6;
  // Uniform frame-size jitter, as a fraction of the mean (+/-).
  double jitter = 0.2;
  // Encoder rate control: the accumulated size error is paid back over this
  // many seconds of frames. 0 leaves frame sizes independent.
  double rate_control_s = 0.5;
  std::uint32_t max_datagram_size = 1200;
  double r_min_bps = 300e3;
  double r_max_bps = 10e6;
  std::optional<Duration> deadline_age;
  std::uint64_t seed = 1;
};

// Rate-adaptive frame generator. Frames are cut into datagram-sized
// fragments that share one frame sequence number.
class VideoSource {
 public:
  explicit VideoSource(VideoSourceConfig config, SimTime start = kSimStart);

  SimTime next_emission() const;
  std::vector<Packet> Tick(SimTime now);

  // Takes effect from the next frame. Throws ContractViolation outside
  // [r_min, r_max].
  void ApplyRate(double bits_per_second);

  double target_bitrate() const { return target_bps_; }
  double mean_frame_bytes() const { return target_bps_ / (8.0 * config_.fps); }
  std::uint64_t frames_emitted() const { return next_frame_; }
  std::uint64_t bytes_emitted() const { return bytes_emitted_; }
  // Bytes emitted above (positive) or below the per-frame targets so far,
  // net of what rate control has already paid back.
  double size_error_bytes() const { return size_error_bytes_; }
  const VideoSourceConfig& config() const { return config_; }

 private:
  VideoSourceConfig config_;
  SimTime start_;
  std::mt19937_64 rng_;
  double target_bps_;
  double pending_bps_;
  std::uint64_t next_frame_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t bytes_emitted_ = 0;
  double size_error_bytes_ = 0.0;
};

}  // namespace aquila

#endif  // AQUILA_TRAFFIC_H_
