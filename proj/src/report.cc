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

#include "aquila/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <system_error>

#include "aquila/errors.h"
#include "aquila/event_queue.h"
#include "aquila/link_model.h"

namespace aquila {
namespace {

using Json = nlohmann::ordered_json;

constexpr Duration kThroughputWindow = std::chrono::seconds(1);

constexpr std::string_view kWcbEndpointNote =
    "w_cb runs from blackout start to the first acknowledged application "
    "packet sent after resumption; confirming that delivery adds two RTTs to "
    "both arms";

Json OptionalNumber(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json ToJson(const SummaryStats& s) {
  Json j;
  j["count"] = s.count;
  if (s.count == 0) return j;
  j["mean"] = s.mean;
  j["stddev"] = s.stddev;
  j["p50"] = s.p50;
  j["p95"] = s.p95;
  j["p99"] = s.p99;
  j["max"] = s.max;
  return j;
}

Json ToJson(const ClassCounters& c) {
  return Json{{"ingested", c.ingested},
              {"dispatched", c.dispatched},
              {"aqm_dropped", c.aqm_dropped},
              {"stale_dropped", c.stale_dropped}};
}

Json ResolvedConfigJson(const ScenarioConfig& config) {
  Json j = Json::object();
  for (const auto& [key, value] : ResolvedKeys(config)) j[key] = value;
  return j;
}

Json ToJson(const BlackoutReport& b) {
  return Json{{"start_ms", ToMillis(b.start)},
              {"mode", ToString(b.mode)},
              {"fell_back", b.fell_back},
              {"handshake_rtts", b.handshake_rtts},
              {"t_phy_ms", ToMillis(b.t_phy)},
              {"t_handshake_ms", ToMillis(b.t_handshake)},
              {"t_confirm_ms", ToMillis(b.t_confirm)},
              {"w_cb_ms", ToMillis(b.w_cb)}};
}

std::optional<double> MeanWcbMs(const std::vector<BlackoutReport>& blackouts) {
  if (blackouts.empty()) return std::nullopt;
  double sum = 0;
  for (const auto& b : blackouts) sum += ToMillis(b.w_cb);
  return sum / static_cast<double>(blackouts.size());
}

std::optional<double> MeanC2LatencyMs(const StreamRunResult& r) {
  const auto lat = r.metrics.LatenciesMs(TrafficClass::kC2);
  if (lat.empty()) return std::nullopt;
  return Summarize(lat).mean;
}

void AppendSeries(RunReport& report, const std::string& arm, const TimeSeries& s) {
  report.series.push_back({arm + "." + s.id, s.t_ms, s.value});
}

Json StreamArmJson(const StreamRunResult& r, RunReport& report) {
  Json arm;
  arm["label"] = r.label;
  arm["scheduler_mode"] = ToString(r.config.scheduler_mode);
  arm["unified_congestion_control"] = r.config.transport_unified;
  arm["c2_channel"] = r.config.transport_c2_over_datagram ? "datagram" : "stream";
  arm["resumption_mode"] = ToString(r.config.transport_resumption_mode);
  arm["end_ms"] = ToMillis(r.end);

  const auto& plr = r.metrics.plr(TrafficClass::kC2);
  const auto c2_lat = r.metrics.LatenciesMs(TrafficClass::kC2);
  arm["c2"] = Json{{"emitted", r.c2_emitted},
                   {"unique_delivered", plr.unique_received()},
                   {"plr", OptionalNumber(plr.Plr())},
                   {"duplicates", plr.duplicates()},
                   {"commands_accepted", r.accepted_commands.size()},
                   {"latency_ms", ToJson(Summarize(c2_lat))}};

  const auto frame_lat = r.metrics.FrameLatenciesMs();
  const auto video_lat = r.metrics.LatenciesMs(TrafficClass::kVideo);
  arm["video"] = Json{{"frames_emitted", r.video_frames},
                      {"bytes_emitted", r.video_bytes},
                      {"frames_delivered", r.metrics.video_frames().size()},
                      {"packets_delivered", video_lat.size()},
                      {"frame_latency_ms", ToJson(Summarize(frame_lat))}};

  arm["sender"] = Json{{"stream_segments", r.sender.stream_segments},
                       {"stream_retransmissions", r.sender.stream_retransmissions},
                       {"datagrams_sent", r.sender.datagrams_sent},
                       {"datagrams_lost", r.sender.datagrams_lost},
                       {"datagrams_rejected", r.sender.datagrams_rejected},
                       {"credit_sends", r.sender.credit_sends},
                       {"control_frames", r.sender.control_frames},
                       {"late_acks", r.sender.late_acks}};
  arm["receiver"] = Json{{"stream_delivered", r.receiver.stream_delivered},
                         {"stream_duplicate_segments", r.receiver.stream_duplicate_segments},
                         {"datagrams_received", r.receiver.datagrams_received},
                         {"replay_duplicates", r.receiver.replay_duplicates},
                         {"replay_stale", r.receiver.replay_stale},
                         {"commands_accepted", r.receiver.commands_accepted}};
  arm["link"] = Json{{"packets_in", r.link.packets_in},
                     {"delivered", r.link.delivered},
                     {"tail_dropped", r.link.tail_dropped},
                     {"loss_dropped", r.link.loss_dropped},
                     {"blackout_dropped", r.link.blackout_dropped},
                     {"bytes_delivered", r.link.bytes_delivered},
                     {"reverse_sent", r.link.reverse_sent},
                     {"reverse_delivered", r.link.reverse_delivered},
                     {"reverse_blackout_dropped", r.link.reverse_blackout_dropped}};
  arm["scheduler"] = Json{{"c2", ToJson(r.scheduler_c2)}, {"video", ToJson(r.scheduler_video)}};

  Json blackouts = Json::array();
  for (const auto& b : r.blackouts) blackouts.push_back(ToJson(b));
  arm["blackouts"] = std::move(blackouts);
  arm["mean_w_cb_ms"] = OptionalNumber(MeanWcbMs(r.blackouts));
  arm["violations"] = r.violations;

  for (const auto& s : r.series) AppendSeries(report, r.label, s);

  // Capacity comes from a fresh link built from the same configuration.
  EventQueue scratch;
  const Link link(scratch, MakeLinkConfig(r.config));
  const auto tp = r.metrics.Throughput(kThroughputWindow, r.end,
                                       [&link](SimTime t) { return link.CapacityAt(t); });
  report.series.push_back({r.label + ".throughput_c2_bps", tp.t_ms, tp.c2_bps});
  report.series.push_back({r.label + ".throughput_video_bps", tp.t_ms, tp.video_bps});
  report.series.push_back({r.label + ".throughput_capacity_bps", tp.t_ms, tp.capacity_bps});

  ReportSeries c2{r.label + ".c2_latency_ms", {}, {}};
  for (const auto& rec : r.metrics.records()) {
    if (rec.cls != TrafficClass::kC2) continue;
    c2.t_ms.push_back(ToMillis(rec.t_tx));
    c2.value.push_back(ToMillis(rec.latency()));
  }
  report.series.push_back(std::move(c2));
  ReportSeries frames{r.label + ".video_frame_latency_ms", {}, {}};
  for (const auto& rec : r.metrics.video_frames()) {
    frames.t_ms.push_back(ToMillis(rec.t_tx));
    frames.value.push_back(ToMillis(rec.latency()));
  }
  report.series.push_back(std::move(frames));

  for (const auto& v : r.violations) report.violations.push_back(r.label + ": " + v);
  return arm;
}

Json SweepArmJson(const SweepArmResult& a) {
  return Json{{"scheduler_mode", ToString(a.mode)},
              {"mean_wait_ms", OptionalNumber(a.mean_wait_ms)},
              {"c2_samples", a.c2_samples},
              {"mean_residual_ms", a.mean_residual_ms},
              {"busy_fraction", a.busy_fraction},
              {"video_dropped", a.video_dropped},
              {"violations", a.violations}};
}

std::optional<double> Ratio(const std::optional<double>& num, const std::optional<double>& den) {
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

void RunSweep(const ScenarioConfig& config, Json& doc, RunReport& report) {
  const auto points = RunPrioritySweep(config);
  Json rows = Json::array();
  std::optional<double> lo;
  std::optional<double> hi;
  for (const auto& p : points) {
    Json row;
    row["load_factor"] = p.load_factor;
    row["lambda_vid"] = p.lambda_vid;
    row["strict_priority"] = SweepArmJson(p.strict);
    row["fifo"] = SweepArmJson(p.fifo);
    row["oracle_wait_ms"] = OptionalNumber(p.oracle_wait_ms);
    row["oracle_samples"] = p.oracle_samples;
    row["prediction_ms"] = p.prediction_ms;
    const auto vs_oracle = Ratio(p.strict.mean_wait_ms, p.oracle_wait_ms);
    row["strict_vs_oracle_error"] =
        vs_oracle ? Json(std::abs(*vs_oracle - 1.0)) : Json(nullptr);
    row["fifo_over_strict"] = OptionalNumber(Ratio(p.fifo.mean_wait_ms, p.strict.mean_wait_ms));
    rows.push_back(std::move(row));
    if (p.strict.mean_wait_ms) {
      lo = lo ? std::min(*lo, *p.strict.mean_wait_ms) : *p.strict.mean_wait_ms;
      hi = hi ? std::max(*hi, *p.strict.mean_wait_ms) : *p.strict.mean_wait_ms;
    }
    for (const auto& v : p.strict.violations) report.violations.push_back("strict: " + v);
    for (const auto& v : p.fifo.violations) report.violations.push_back("fifo: " + v);
  }
  doc["arms"] = Json{{"sweep", std::move(rows)}};
  Json cmp;
  cmp["strict_wait_spread"] = lo && hi && *lo > 0 ? Json((*hi - *lo) / *lo) : Json(nullptr);
  doc["comparison"] = std::move(cmp);
}

}  // namespace

RunReport ExecuteScenario(const ScenarioConfig& config, RunMode mode) {
  ValidateScenario(config);
  RunReport report;
  Json& doc = report.document;
  doc["schema_version"] = kReportSchemaVersion;
  doc["scenario"] = config.name;
  doc["description"] = config.description;
  doc["kind"] = ToString(config.kind);
  doc["mode"] = mode == RunMode::kCompare ? "compare" : "run";
  doc["seed"] = config.seed;
  doc["config"] = ResolvedConfigJson(config);

  if (config.kind == ScenarioKind::kPrioritySweep) {
    RunSweep(config, doc, report);
  } else {
    const bool paired = mode == RunMode::kCompare || config.kind == ScenarioKind::kHandover;
    const StreamRunResult primary = RunStream(config, "aquila");
    Json arms;
    arms["aquila"] = StreamArmJson(primary, report);
    if (paired) {
      const ScenarioConfig baseline_config = BaselineArm(config);
      doc["baseline_config"] = ResolvedConfigJson(baseline_config);
      const StreamRunResult baseline = RunStream(baseline_config, "baseline");
      arms["baseline"] = StreamArmJson(baseline, report);
      Json cmp;
      const auto a = MeanC2LatencyMs(primary);
      const auto b = MeanC2LatencyMs(baseline);
      cmp["c2_latency_mean_ms"] = Json{{"aquila", OptionalNumber(a)}, {"baseline", OptionalNumber(b)}};
      cmp["c2_latency_ratio"] = OptionalNumber(Ratio(b, a));
      if (config.kind == ScenarioKind::kHandover) {
        const auto wa = MeanWcbMs(primary.blackouts);
        const auto wb = MeanWcbMs(baseline.blackouts);
        cmp["w_cb_mean_ms"] = Json{{"aquila", OptionalNumber(wa)}, {"baseline", OptionalNumber(wb)}};
        const auto r = Ratio(wa, wb);
        cmp["w_cb_reduction"] = r ? Json(1.0 - *r) : Json(nullptr);
        cmp["w_cb_endpoint"] = kWcbEndpointNote;
      }
      doc["comparison"] = std::move(cmp);
    }
    doc["arms"] = std::move(arms);
  }
  doc["invariants"] = Json{{"ok", report.ok()}, {"violations", report.violations}};
  return report;
}

std::string SerializeDocument(const RunReport& report) { return report.document.dump(2) + "\n"; }

std::string SerializeSeries(const ReportSeries& series) {
  std::string out = "t_ms,value,series_id\n";
  char buf[64];
  auto put = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
  };
  for (std::size_t i = 0; i < series.t_ms.size(); ++i) {
    put(series.t_ms[i]);
    out += ',';
    put(series.value[i]);
    out += ',';
    out += series.series_id;
    out += '\n';
  }
  return out;
}

void WriteReport(const RunReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ConfigError("--out", "cannot create " + out_dir.string() + ": " + ec.message());
  auto write = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw ConfigError("--out", "cannot write " + path.string());
  };
  write(out_dir / "report.json", SerializeDocument(report));
  for (const auto& s : report.series) write(out_dir / (s.series_id + ".csv"), SerializeSeries(s));
}

}  // namespace aquila
