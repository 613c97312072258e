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

#include "aquila/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aquila/errors.h"

namespace aquila {

bool PlrAccumulator::Record(std::uint64_t seq) {
  if (seq >= seen_.size()) seen_.resize(std::max<std::size_t>(seq + 1, seen_.size() * 2), false);
  if (seen_[seq]) {
    ++duplicates_;
    return false;
  }
  seen_[seq] = true;
  ++unique_;
  return true;
}

std::optional<double> PlrAccumulator::Plr() const {
  if (expected_ == 0) return std::nullopt;
  std::uint64_t m = 0;
  const std::size_t limit = std::min<std::size_t>(expected_, seen_.size());
  for (std::size_t i = 0; i < limit; ++i) m += seen_[i] ? 1 : 0;
  return 1.0 - static_cast<double>(m) / static_cast<double>(expected_);
}

SummaryStats Summarize(std::span<const double> values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.count);
  double ss = 0;
  for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.stddev = s.count > 1 ? std::sqrt(ss / static_cast<double>(s.count - 1)) : 0.0;
  auto pct = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(s.count))) - 1;
    return sorted[std::min(idx, s.count - 1)];
  };
  s.p50 = pct(0.50);
  s.p95 = pct(0.95);
  s.p99 = pct(0.99);
  s.max = sorted.back();
  return s;
}

bool MetricsCollector::RecordRx(const Packet& p, SimTime now) {
  if (now < p.tx_time) throw ContractViolation("packet received before it was sent");
  const LatencyRecord rec{p.cls, p.seq, p.tx_time, now, p.size_bytes};
  if (!plr(p.cls).Record(p.seq)) {
    duplicates_.push_back(rec);
    return false;
  }
  records_.push_back(rec);
  if (p.cls == TrafficClass::kVideo) {
    auto& progress = pending_frames_[p.frame.frame_seq];
    progress.count = p.frame.count;
    progress.t_tx = p.tx_time;
    progress.bytes += p.size_bytes;
    if (++progress.received == progress.count) {
      frames_.push_back({TrafficClass::kVideo, p.frame.frame_seq, p.tx_time, now, progress.bytes});
      pending_frames_.erase(p.frame.frame_seq);
    }
  }
  return true;
}

std::vector<double> MetricsCollector::LatenciesMs(TrafficClass cls, SimTime from,
                                                  SimTime to) const {
  std::vector<double> out;
  for (const auto& r : records_) {
    if (r.cls == cls && r.t_tx >= from && r.t_tx < to) out.push_back(ToMillis(r.latency()));
  }
  return out;
}

std::vector<double> MetricsCollector::FrameLatenciesMs() const {
  std::vector<double> out;
  out.reserve(frames_.size());
  for (const auto& f : frames_) out.push_back(ToMillis(f.latency()));
  return out;
}

ThroughputSeries MetricsCollector::Throughput(
    Duration window, SimTime end, const std::function<double(SimTime)>& capacity_at) const {
  if (window <= Duration::zero()) throw ContractViolation("throughput window must be positive");
  ThroughputSeries series;
  series.window = window;
  const auto bins = static_cast<std::size_t>((end - kSimStart + window - Duration{1}) / window);
  series.c2_bps.assign(bins, 0.0);
  series.video_bps.assign(bins, 0.0);
  for (std::size_t i = 0; i < bins; ++i) {
    const SimTime start = kSimStart + window * static_cast<std::int64_t>(i);
    series.t_ms.push_back(ToMillis(start));
    series.capacity_bps.push_back(capacity_at ? capacity_at(start) : 0.0);
  }
  const double scale = 8.0 / ToSeconds(window);
  for (const auto& r : records_) {
    const auto bin = static_cast<std::size_t>((r.t_rx - kSimStart) / window);
    if (bin >= bins) continue;
    auto& slot = r.cls == TrafficClass::kC2 ? series.c2_bps[bin] : series.video_bps[bin];
    slot += r.size_bytes * scale;
  }
  return series;
}

}  // namespace aquila
