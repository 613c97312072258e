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

#include "aquila/experiments.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "aquila/congestion.h"
#include "aquila/event_queue.h"
#include "aquila/queue_oracle.h"
#include "aquila/traffic.h"

namespace aquila {
namespace {

constexpr std::size_t kMaxReportedViolations = 50;

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step, so per-purpose streams stay independent.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

void InvariantMonitor::Check(bool ok, SimTime at, std::string_view what) {
  if (ok) return;
  if (violations_.size() >= kMaxReportedViolations) {
    ++suppressed_;
    return;
  }
  violations_.push_back("t=" + std::to_string(ToMicros(at)) + "us: " + std::string(what));
}

const TimeSeries* StreamRunResult::Find(std::string_view id) const {
  for (const auto& s : series) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

StreamRunResult RunStream(const ScenarioConfig& config, std::string label) {
  ValidateScenario(config);
  StreamRunResult r;
  r.label = std::move(label);
  r.config = config;

  EventQueue events;
  Link link(events, MakeLinkConfig(config));
  PriorityScheduler scheduler(MakeSchedulerConfig(config));
  ScreamFpvController controller(MakeCcaConfig(config));
  std::optional<ScreamFpvController> c2_controller;
  if (!config.transport_unified) c2_controller.emplace(MakeCcaConfig(config));
  const TransportConfig transport = MakeTransportConfig(config);
  SenderEndpoint sender(events, link, scheduler, controller, transport,
                        c2_controller ? &*c2_controller : nullptr);
  ReceiverEndpoint receiver(events, r.metrics, transport);
  link.set_receiver([&receiver](const TransportFrame& f) { receiver.OnFrame(f); });
  receiver.set_feedback([&link, &sender](const AckFrame& ack) {
    link.SendReverse([&sender, ack] { sender.OnAck(ack); });
  });

  const SimTime stop = AtSeconds(config.duration_s);
  const SimTime end = stop + Seconds(config.drain_s);
  InvariantMonitor monitor;

  C2Source c2(MakeC2Config(config));
  std::function<void()> emit_c2 = [&] {
    for (const auto& p : c2.Tick(events.now())) sender.Submit(p);
    if (c2.next_emission() < stop) {
      events.ScheduleAt(c2.next_emission(), ComponentId::kTraffic, EventKind::kPacketArrival,
                        emit_c2);
    }
  };
  events.ScheduleAt(c2.next_emission(), ComponentId::kTraffic, EventKind::kPacketArrival, emit_c2);

  std::optional<VideoSource> video;
  std::function<void()> emit_video;
  // The encoder reads the coupled rate at every frame boundary.
  const bool encoder_feedback =
      config.video_enabled && config.transport_unified && !config.video_saturate;
  if (config.video_enabled) {
    video.emplace(MakeVideoConfig(config));
    emit_video = [&] {
      if (encoder_feedback) video->ApplyRate(controller.EncoderRate());
      for (const auto& p : video->Tick(events.now())) sender.Submit(p);
      if (video->next_emission() < stop) {
        events.ScheduleAt(video->next_emission(), ComponentId::kTraffic,
                          EventKind::kPacketArrival, emit_video);
      }
    };
    events.ScheduleAt(video->next_emission(), ComponentId::kTraffic, EventKind::kPacketArrival,
                      emit_video);
  }

  r.series = {{"cwnd_bytes", {}, {}},        {"queue_delay_ms", {}, {}},
              {"target_delay_ms", {}, {}},   {"encoder_rate_bps", {}, {}},
              {"transmit_rate_bps", {}, {}}, {"bytes_in_flight", {}, {}},
              {"capacity_bps", {}, {}},      {"link_queue_bytes", {}, {}},
              {"c2_credits_bytes", {}, {}}};
  auto& s_cwnd = r.series[0];
  auto& s_dq = r.series[1];
  auto& s_target = r.series[2];
  auto& s_enc = r.series[3];
  auto& s_rtx = r.series[4];
  auto& s_flight = r.series[5];
  auto& s_cap = r.series[6];
  auto& s_queue = r.series[7];
  auto& s_credit = r.series[8];
  const std::uint64_t q_low_cap = MakeSchedulerConfig(config).q_low_capacity_bytes;

  std::function<void()> tick = [&] {
    const SimTime now = events.now();
    const double t = ToMillis(now);
    s_cwnd.Add(t, controller.cwnd_bytes());
    if (auto dq = controller.QueueDelayEstimate(now)) {
      s_dq.Add(t, ToMillis(*dq));
      monitor.Check(*dq >= Duration::zero(), now, "negative queue delay estimate");
    }
    if (auto target = controller.TargetDelay(now)) s_target.Add(t, ToMillis(*target));
    s_enc.Add(t, controller.EncoderRate());
    s_rtx.Add(t, controller.TransmitRateEstimate());
    s_flight.Add(t, static_cast<double>(sender.bytes_in_flight()));
    s_cap.Add(t, link.CapacityAt(now));
    s_queue.Add(t, static_cast<double>(link.occupancy_bytes()));
    s_credit.Add(t, sender.controller_for(TrafficClass::kC2).credits_bytes());

    monitor.Check(std::isfinite(controller.cwnd_bytes()) &&
                      controller.cwnd_bytes() >= controller.cwnd_min_bytes() - 1e-9,
                  now, "cwnd below its floor");
    const auto& lc = link.counters();
    monitor.Check(lc.packets_in == lc.delivered + lc.tail_dropped + lc.loss_dropped +
                                       lc.blackout_dropped + link.queued_packets() +
                                       link.in_transit(),
                  now, "link packet conservation");
    monitor.Check(link.occupancy_bytes() <= link.queue_capacity_bytes(), now,
                  "link queue over capacity");
    monitor.Check(scheduler.low_occupancy_bytes() <= q_low_cap, now,
                  "video queue over its byte budget");

    sender.TrySend();
    if (now + kTickInterval <= end) {
      events.ScheduleIn(kTickInterval, ComponentId::kHarness, EventKind::kTimer, tick);
    }
  };
  events.ScheduleAt(kSimStart, ComponentId::kHarness, EventKind::kTimer, tick);

  events.RunUntil(end);

  r.end = end;
  r.c2_emitted = c2.emitted();
  r.metrics.plr(TrafficClass::kC2).set_expected(c2.emitted());
  if (video) {
    r.video_frames = video->frames_emitted();
    r.video_bytes = video->bytes_emitted();
  }
  r.blackouts = sender.blackout_reports();
  r.sender = sender.stats();
  r.receiver = receiver.stats();
  r.link = link.counters();
  r.scheduler_c2 = scheduler.counters(TrafficClass::kC2);
  r.scheduler_video = scheduler.counters(TrafficClass::kVideo);
  r.accepted_commands = receiver.accepted_commands();

  const auto& accepted = r.accepted_commands;
  monitor.Check(std::adjacent_find(accepted.begin(), accepted.end(),
                                   [](auto a, auto b) { return b <= a; }) == accepted.end(),
                end, "accepted commands not strictly increasing");
  monitor.Check(r.metrics.duplicates().empty(), end, "duplicate delivery reached the metrics sink");
  monitor.Check(r.receiver.stream_delivered <= r.sender.stream_segments, end,
                "stream delivered more segments than were sent");
  if (!config.transport_c2_over_datagram && sender.StreamDrained()) {
    const auto plr = r.metrics.plr(TrafficClass::kC2).Plr();
    monitor.Check(!plr || *plr == 0.0, end, "reliable stream lost data after draining");
  }
  r.violations = monitor.violations();
  return r;
}

std::vector<double> DeliveredRateByTx(const MetricsCollector& metrics, TrafficClass cls,
                                      Duration window, SimTime end) {
  const auto bins = static_cast<std::size_t>((end.time_since_epoch() + window - Duration{1}) / window);
  std::vector<double> bits(bins, 0.0);
  for (const auto& rec : metrics.records()) {
    if (rec.cls != cls || rec.t_tx >= end) continue;
    bits[static_cast<std::size_t>(rec.t_tx.time_since_epoch() / window)] += rec.size_bytes * 8.0;
  }
  for (auto& b : bits) b /= ToSeconds(window);
  return bits;
}

std::optional<double> SeriesMean(const TimeSeries& series, SimTime from, SimTime to) {
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < series.t_ms.size(); ++i) {
    if (series.t_ms[i] >= ToMillis(from) && series.t_ms[i] < ToMillis(to)) {
      sum += series.value[i];
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

SweepArmResult RunSweepArm(const ScenarioConfig& config, double lambda_vid, SchedulerMode mode) {
  SweepArmResult out;
  out.mode = mode;
  out.lambda_vid = lambda_vid;

  const double rate = config.link_rate_mbps.front().second * 1e6;
  const double mean_bytes = config.sweep_mean_service_ms / 1e3 * rate / 8.0;
  const SimTime horizon = AtSeconds(config.sweep_duration_s);

  EventQueue events;
  LinkConfig lc = LinkConfig::Constant(rate, Millis(config.link_delay_ms));
  lc.mtu_bytes = 65535;
  lc.queue_capacity_bytes = std::uint64_t{1} << 32;
  Link link(events, lc);
  SchedulerConfig sc = MakeSchedulerConfig(config);
  sc.mode = mode;
  sc.stale_after.reset();
  sc.q_low_capacity_bytes = std::numeric_limits<std::uint64_t>::max();
  sc.q_low_capacity_packets = config.sweep_q_low_packets;
  PriorityScheduler scheduler(sc);
  InvariantMonitor monitor;

  // Arrival streams do not depend on the scheduler, so both modes see the
  // same packets at the same instants.
  std::mt19937_64 c2_gaps(MixSeed(config.seed, 11));
  std::mt19937_64 vid_gaps(MixSeed(config.seed, 12));
  std::mt19937_64 c2_sizes(MixSeed(config.seed, 13));
  std::mt19937_64 vid_sizes(MixSeed(config.seed, 14));
  std::exponential_distribution<double> size_dist(1.0 / mean_bytes);
  auto draw_size = [&](std::mt19937_64& rng) {
    const double b = std::max(1.0, std::round(size_dist(rng)));
    return static_cast<std::uint32_t>(std::min(b, 65535.0));
  };

  double wait_sum_us = 0;
  double residual_sum_us = 0;
  std::uint64_t residual_samples = 0;
  std::uint64_t busy_us = 0;
  std::uint64_t next_pn = 0;

  auto feed = [&] {
    if (link.busy() || link.queued_packets() > 0) return;
    const SimTime now = events.now();
    bool taken = false;
    auto batch = scheduler.Dispatch(now, [&taken](const Packet&) {
      if (taken) return false;
      taken = true;
      return true;
    });
    for (const auto& d : batch) {
      const Duration service = SerializationTime(d.packet.size_bytes, rate);
      scheduler.OnTransmissionStart(now, service);
      if (now < horizon) busy_us += static_cast<std::uint64_t>(service.count());
      if (d.packet.cls == TrafficClass::kC2) {
        wait_sum_us += static_cast<double>((now - d.packet.tx_time).count());
        ++out.c2_samples;
      }
      link.Send(TransportFrame{d.channel, d.packet, next_pn++, 0});
    }
  };
  link.set_idle_callback(feed);

  std::uint64_t c2_seq = 0;
  std::uint64_t vid_seq = 0;
  std::function<void()> c2_arrival;
  std::function<void()> vid_arrival;
  auto schedule_next = [&](std::mt19937_64& gaps, double lambda, std::function<void()>& fn) {
    if (lambda <= 0) return;
    const double gap_s = std::exponential_distribution<double>(lambda)(gaps);
    const SimTime at = events.now() + Seconds(gap_s);
    if (at < horizon) events.ScheduleAt(at, ComponentId::kTraffic, EventKind::kPacketArrival, fn);
  };
  c2_arrival = [&] {
    const SimTime now = events.now();
    residual_sum_us += static_cast<double>(scheduler.ResidualService(now).count());
    ++residual_samples;
    Packet p;
    p.cls = TrafficClass::kC2;
    p.seq = c2_seq++;
    p.tx_time = now;
    p.size_bytes = draw_size(c2_sizes);
    scheduler.Ingest(p, now);
    feed();
    schedule_next(c2_gaps, config.sweep_lambda_c2, c2_arrival);
  };
  vid_arrival = [&] {
    const SimTime now = events.now();
    Packet p;
    p.cls = TrafficClass::kVideo;
    p.seq = vid_seq++;
    p.tx_time = now;
    p.size_bytes = draw_size(vid_sizes);
    scheduler.Ingest(p, now);
    feed();
    schedule_next(vid_gaps, lambda_vid, vid_arrival);
  };
  schedule_next(c2_gaps, config.sweep_lambda_c2, c2_arrival);
  schedule_next(vid_gaps, lambda_vid, vid_arrival);

  // Arrivals stop at the horizon; the tail lets queued C2 reach the link.
  events.RunUntil(horizon);
  const SimTime drain_end = horizon + std::chrono::seconds(5);
  while (scheduler.high_size() > 0 && events.now() < drain_end) {
    events.RunUntil(std::min(drain_end, events.now() + std::chrono::milliseconds(100)));
  }

  const auto c2_counts = scheduler.counters(TrafficClass::kC2);
  monitor.Check(c2_counts.dispatched == out.c2_samples, events.now(),
                "C2 dispatch count disagrees with waiting samples");
  monitor.Check(c2_counts.aqm_dropped == 0 && c2_counts.stale_dropped == 0, events.now(),
                "C2 dropped by the scheduler");
  if (out.c2_samples > 0) out.mean_wait_ms = wait_sum_us / static_cast<double>(out.c2_samples) / 1e3;
  if (residual_samples > 0) {
    out.mean_residual_ms = residual_sum_us / static_cast<double>(residual_samples) / 1e3;
  }
  out.busy_fraction = static_cast<double>(busy_us) / static_cast<double>(ToMicros(horizon));
  const auto vid_counts = scheduler.counters(TrafficClass::kVideo);
  out.video_dropped = vid_counts.aqm_dropped + vid_counts.stale_dropped;
  out.violations = monitor.violations();
  return out;
}

std::vector<SweepPoint> RunPrioritySweep(const ScenarioConfig& config) {
  ValidateScenario(config);
  std::vector<SweepPoint> points;
  const double mu = 1e3 / config.sweep_mean_service_ms;
  const FloatSeconds mean_service{config.sweep_mean_service_ms / 1e3};
  for (double factor : config.sweep_load_factors) {
    SweepPoint p;
    p.load_factor = factor;
    p.lambda_vid = factor * mu;
    p.strict = RunSweepArm(config, p.lambda_vid, SchedulerMode::kStrictPriority);
    p.fifo = RunSweepArm(config, p.lambda_vid, SchedulerMode::kFifo);
    const auto oracle =
        MmPriorityOracle(config.sweep_lambda_c2, p.lambda_vid, mean_service,
                         FloatSeconds{config.sweep_duration_s}, MixSeed(config.seed, 21));
    if (oracle.mean_wait) p.oracle_wait_ms = oracle.mean_wait->count() * 1e3;
    p.oracle_samples = oracle.samples;
    auto params = QueueOracleParams::From(config.sweep_lambda_c2, p.lambda_vid, mean_service);
    params.residual = FloatSeconds{p.strict.mean_residual_ms / 1e3};
    p.prediction_ms = DecouplingPrediction(params).count() * 1e3;
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace aquila
