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

#include "aquila/scenario.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "aquila/errors.h"

namespace aquila {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(Trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

std::string FormatNumber(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <typename T>
std::string FormatNumber(T v) requires std::is_integral_v<T> {
  return std::to_string(v);
}

double ParseDouble(std::string_view key, std::string_view text) {
  text = Trim(text);
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

template <typename T>
T ParseInteger(std::string_view key, std::string_view text) {
  text = Trim(text);
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool ParseBool(std::string_view key, std::string_view text) {
  text = Trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + std::string(text) + "'");
}

std::vector<std::pair<double, double>> ParsePairs(std::string_view key, std::string_view text) {
  std::vector<std::pair<double, double>> out;
  if (Trim(text).empty()) return out;
  for (auto item : Split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError(std::string(key), "expected 'a:b' pairs, got '" + std::string(item) + "'");
    }
    out.emplace_back(ParseDouble(key, item.substr(0, colon)),
                     ParseDouble(key, item.substr(colon + 1)));
  }
  return out;
}

std::string FormatPairs(const std::vector<std::pair<double, double>>& pairs) {
  std::string out;
  for (const auto& [a, b] : pairs) {
    if (!out.empty()) out += ',';
    out += FormatNumber(a) + ':' + FormatNumber(b);
  }
  return out;
}

SchedulerMode ParseSchedulerMode(std::string_view key, std::string_view text) {
  text = Trim(text);
  if (text == "strict_priority") return SchedulerMode::kStrictPriority;
  if (text == "fifo") return SchedulerMode::kFifo;
  throw ConfigError(std::string(key), "expected strict_priority or fifo");
}

ResumptionMode ParseResumption(std::string_view key, std::string_view text) {
  text = Trim(text);
  for (auto m : {ResumptionMode::kZeroRtt, ResumptionMode::kFullHandshake,
                 ResumptionMode::kTcpTlsBaseline}) {
    if (text == ToString(m)) return m;
  }
  throw ConfigError(std::string(key), "expected zero_rtt, full_handshake or tcp_tls");
}

ScenarioKind ParseKind(std::string_view key, std::string_view text) {
  text = Trim(text);
  for (auto k : {ScenarioKind::kStream, ScenarioKind::kHandover, ScenarioKind::kPrioritySweep}) {
    if (text == ToString(k)) return k;
  }
  throw ConfigError(std::string(key), "expected stream, handover or priority_sweep");
}

struct KeyDef {
  std::string_view key;
  std::string_view help;
  std::function<void(ScenarioConfig&, std::string_view key, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename T>
KeyDef Number(std::string_view key, std::string_view help, T ScenarioConfig::*field) {
  return KeyDef{key, help,
                [field](ScenarioConfig& c, std::string_view k, std::string_view v) {
                  if constexpr (std::is_floating_point_v<T>) {
                    c.*field = ParseDouble(k, v);
                  } else {
                    c.*field = ParseInteger<T>(k, v);
                  }
                },
                [field](const ScenarioConfig& c) { return FormatNumber(c.*field); }};
}

KeyDef Flag(std::string_view key, std::string_view help, bool ScenarioConfig::*field) {
  return KeyDef{key, help,
                [field](ScenarioConfig& c, std::string_view k, std::string_view v) {
                  c.*field = ParseBool(k, v);
                },
                [field](const ScenarioConfig& c) {
                  return std::string(c.*field ? "true" : "false");
                }};
}

KeyDef Text(std::string_view key, std::string_view help, std::string ScenarioConfig::*field) {
  return KeyDef{key, help,
                [field](ScenarioConfig& c, std::string_view, std::string_view v) {
                  c.*field = std::string(Trim(v));
                },
                [field](const ScenarioConfig& c) { return c.*field; }};
}

KeyDef Pairs(std::string_view key, std::string_view help,
             std::vector<std::pair<double, double>> ScenarioConfig::*field) {
  return KeyDef{key, help,
                [field](ScenarioConfig& c, std::string_view k, std::string_view v) {
                  c.*field = ParsePairs(k, v);
                },
                [field](const ScenarioConfig& c) { return FormatPairs(c.*field); }};
}

const std::vector<KeyDef>& KeyTable() {
  static const std::vector<KeyDef> table = [] {
    std::vector<KeyDef> t;
    t.push_back(Text("name", "scenario name", &ScenarioConfig::name));
    t.push_back(Text("description", "one-line description", &ScenarioConfig::description));
    t.push_back(KeyDef{"kind", "stream | handover | priority_sweep",
                       [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                         c.kind = ParseKind(k, v);
                       },
                       [](const ScenarioConfig& c) { return std::string(ToString(c.kind)); }});
    t.push_back(Number("duration_s", "traffic duration", &ScenarioConfig::duration_s));
    t.push_back(Number("drain_s", "extra time for in-flight data after sources stop",
                       &ScenarioConfig::drain_s));
    t.push_back(Number("seed", "master RNG seed", &ScenarioConfig::seed));

    t.push_back(KeyDef{"link.rate_mbps", "constant rate, or start_s:mbps steps",
                       [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                         if (v.find(':') == std::string_view::npos) {
                           c.link_rate_mbps = {{0.0, ParseDouble(k, v)}};
                         } else {
                           c.link_rate_mbps = ParsePairs(k, v);
                         }
                       },
                       [](const ScenarioConfig& c) { return FormatPairs(c.link_rate_mbps); }});
    t.push_back(Text("link.trace_path", "delivery-opportunity trace (overrides rate)",
                     &ScenarioConfig::link_trace_path));
    t.push_back(Number("link.delay_ms", "one-way propagation delay", &ScenarioConfig::link_delay_ms));
    t.push_back(Number("link.loss", "random loss probability", &ScenarioConfig::link_loss));
    t.push_back(Number("link.queue_bytes", "bottleneck queue (0: 250 ms of initial rate)",
                       &ScenarioConfig::link_queue_bytes));
    t.push_back(Number("link.mtu", "link MTU in bytes", &ScenarioConfig::link_mtu));
    t.push_back(Pairs("link.handovers", "start_s:t_phy_ms list", &ScenarioConfig::link_handovers));

    t.push_back(KeyDef{"scheduler.mode", "strict_priority | fifo",
                       [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                         c.scheduler_mode = ParseSchedulerMode(k, v);
                       },
                       [](const ScenarioConfig& c) {
                         return std::string(ToString(c.scheduler_mode));
                       }});
    t.push_back(Number("scheduler.q_low_bytes", "video queue byte budget",
                       &ScenarioConfig::scheduler_q_low_bytes));
    t.push_back(Number("scheduler.stale_ms", "video staleness limit (0 disables)",
                       &ScenarioConfig::scheduler_stale_ms));

    t.push_back(Number("cca.window_s", "min-RTT window", &ScenarioConfig::cca_window_s));
    t.push_back(Number("cca.kappa", "delay target tolerance", &ScenarioConfig::cca_kappa));
    t.push_back(Number("cca.beta", "decrease gain", &ScenarioConfig::cca_beta));
    t.push_back(Number("cca.gamma", "encoder damping", &ScenarioConfig::cca_gamma));
    t.push_back(Number("cca.d_base_ms", "delay target floor", &ScenarioConfig::cca_d_base_ms));
    t.push_back(Number("cca.r_safe_kbps", "C2 headroom", &ScenarioConfig::cca_r_safe_kbps));
    t.push_back(Number("cca.r_min_kbps", "encoder floor", &ScenarioConfig::cca_r_min_kbps));
    t.push_back(Number("cca.r_max_kbps", "encoder ceiling", &ScenarioConfig::cca_r_max_kbps));
    t.push_back(Number("cca.packet_size", "additive increase step", &ScenarioConfig::cca_packet_size));
    t.push_back(Number("cca.initial_cwnd_bytes", "initial window (0: 10 packets)",
                       &ScenarioConfig::cca_initial_cwnd_bytes));
    t.push_back(Number("cca.credit_cap_bytes", "credit cap (0: one window)",
                       &ScenarioConfig::cca_credit_cap_bytes));
    t.push_back(Number("cca.initial_kbps", "rate estimate before the first RTT sample",
                       &ScenarioConfig::cca_initial_kbps));

    t.push_back(KeyDef{"transport.resumption_mode", "zero_rtt | full_handshake | tcp_tls",
                       [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                         c.transport_resumption_mode = ParseResumption(k, v);
                       },
                       [](const ScenarioConfig& c) {
                         return std::string(ToString(c.transport_resumption_mode));
                       }});
    t.push_back(Number("transport.handshake_rtts", "handshake round trips (-1: mode default)",
                       &ScenarioConfig::transport_handshake_rtts));
    t.push_back(Flag("transport.session_ticket", "resumption ticket held",
                     &ScenarioConfig::transport_session_ticket));
    t.push_back(Number("transport.max_datagram_size", "largest datagram",
                       &ScenarioConfig::transport_max_datagram_size));
    t.push_back(Number("transport.overlay_overhead", "tunnel bytes per packet",
                       &ScenarioConfig::transport_overlay_overhead));
    t.push_back(Number("transport.freshness_s", "replay freshness horizon",
                       &ScenarioConfig::transport_freshness_s));
    t.push_back(Flag("transport.unified", "one congestion context for both channels",
                     &ScenarioConfig::transport_unified));
    t.push_back(Flag("transport.c2_over_datagram", "send C2 as raw datagrams",
                     &ScenarioConfig::transport_c2_over_datagram));

    t.push_back(Number("c2.rate_hz", "command rate", &ScenarioConfig::c2_rate_hz));
    t.push_back(Number("c2.payload_bytes", "command size", &ScenarioConfig::c2_payload_bytes));

    t.push_back(Flag("video.enabled", "run the video source", &ScenarioConfig::video_enabled));
    t.push_back(Number("video.fps", "frame rate", &ScenarioConfig::video_fps));
    t.push_back(Number("video.initial_kbps", "starting encoder rate",
                       &ScenarioConfig::video_initial_kbps));
    t.push_back(Number("video.jitter", "frame size jitter fraction", &ScenarioConfig::video_jitter));
    t.push_back(Number("video.rate_control_s", "horizon for paying back frame size error (0: none)",
                       &ScenarioConfig::video_rate_control_s));
    t.push_back(Flag("video.saturate", "encoder ignores feedback and offers r_max",
                     &ScenarioConfig::video_saturate));

    t.push_back(Number("sweep.lambda_c2", "C2 Poisson rate (1/s)", &ScenarioConfig::sweep_lambda_c2));
    t.push_back(Number("sweep.mean_service_ms", "mean service time",
                       &ScenarioConfig::sweep_mean_service_ms));
    t.push_back(KeyDef{"sweep.load_factors", "video rate as multiples of the service rate",
                       [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                         c.sweep_load_factors.clear();
                         for (auto item : Split(v, ',')) {
                           c.sweep_load_factors.push_back(ParseDouble(k, item));
                         }
                       },
                       [](const ScenarioConfig& c) {
                         std::string out;
                         for (double f : c.sweep_load_factors) {
                           if (!out.empty()) out += ',';
                           out += FormatNumber(f);
                         }
                         return out;
                       }});
    t.push_back(Number("sweep.duration_s", "simulated time per sweep arm",
                       &ScenarioConfig::sweep_duration_s));
    t.push_back(Number("sweep.q_low_packets", "video queue limit in packets for the sweep",
                       &ScenarioConfig::sweep_q_low_packets));
    return t;
  }();
  return table;
}

const KeyDef* FindKey(std::string_view key) {
  for (const auto& def : KeyTable()) {
    if (def.key == key) return &def;
  }
  return nullptr;
}

constexpr std::string_view kBaselinePrefix = "baseline.";

}  // namespace

std::string_view ToString(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kStream: return "stream";
    case ScenarioKind::kHandover: return "handover";
    case ScenarioKind::kPrioritySweep: return "priority_sweep";
  }
  return "unknown";
}

std::vector<ScenarioKey> ScenarioKeys() {
  std::vector<ScenarioKey> out;
  for (const auto& def : KeyTable()) out.push_back({def.key, def.help});
  return out;
}

void SetScenarioKey(ScenarioConfig& config, std::string_view key, std::string_view value) {
  if (key.starts_with(kBaselinePrefix)) {
    const auto inner = key.substr(kBaselinePrefix.size());
    if (inner == "name" || inner == "kind" || inner.starts_with(kBaselinePrefix)) {
      throw ConfigError(std::string(key), "cannot be overridden in the baseline arm");
    }
    ScenarioConfig probe;
    SetScenarioKey(probe, inner, value);  // validates key and value
    config.baseline_overrides[std::string(inner)] = std::string(Trim(value));
    return;
  }
  const KeyDef* def = FindKey(key);
  if (!def) throw ConfigError(std::string(key), "unknown key");
  def->set(config, key, value);
}

std::vector<std::pair<std::string, std::string>> ResolvedKeys(const ScenarioConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& def : KeyTable()) out.emplace_back(std::string(def.key), def.get(config));
  for (const auto& [k, v] : config.baseline_overrides) {
    out.emplace_back(std::string(kBaselinePrefix) + k, v);
  }
  return out;
}

ScenarioConfig ParseScenario(std::istream& in) {
  ScenarioConfig config;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = Trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(Trim(view.substr(0, eq)));
    if (key.empty()) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": missing key");
    }
    if (!seen.insert(key).second) throw ConfigError(key, "set more than once");
    SetScenarioKey(config, key, Trim(view.substr(eq + 1)));
  }
  ValidateScenario(config);
  return config;
}

ScenarioConfig ParseScenarioText(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseScenario(in);
}

ScenarioConfig LoadScenarioFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  return ParseScenario(in);
}

ScenarioConfig BaselineArm(const ScenarioConfig& config) {
  ScenarioConfig arm = config;
  arm.baseline_overrides.clear();
  switch (config.kind) {
    case ScenarioKind::kStream:
      arm.scheduler_mode = SchedulerMode::kFifo;
      arm.transport_unified = false;
      break;
    case ScenarioKind::kHandover:
      arm.transport_resumption_mode = ResumptionMode::kTcpTlsBaseline;
      break;
    case ScenarioKind::kPrioritySweep:
      arm.scheduler_mode = SchedulerMode::kFifo;
      break;
  }
  for (const auto& [k, v] : config.baseline_overrides) SetScenarioKey(arm, k, v);
  ValidateScenario(arm);
  return arm;
}

void ValidateScenario(const ScenarioConfig& c) {
  auto require = [](bool ok, std::string_view key, const std::string& what) {
    if (!ok) throw ConfigError(std::string(key), what);
  };
  require(c.duration_s > 0, "duration_s", "must be positive");
  require(c.drain_s >= 0, "drain_s", "must be non-negative");
  require(!c.link_rate_mbps.empty(), "link.rate_mbps", "needs at least one step");
  require(c.link_rate_mbps.front().first == 0.0, "link.rate_mbps", "first step must start at 0");
  for (std::size_t i = 0; i < c.link_rate_mbps.size(); ++i) {
    require(c.link_rate_mbps[i].second > 0, "link.rate_mbps", "rates must be positive");
    if (i > 0) {
      require(c.link_rate_mbps[i].first > c.link_rate_mbps[i - 1].first, "link.rate_mbps",
              "step times must increase");
    }
  }
  require(c.link_delay_ms >= 0, "link.delay_ms", "must be non-negative");
  require(c.link_loss >= 0 && c.link_loss <= 1, "link.loss", "must lie in [0, 1]");
  require(c.link_mtu >= 64, "link.mtu", "must be at least 64 bytes");
  require(c.link_queue_bytes == 0 || c.link_queue_bytes > c.link_mtu, "link.queue_bytes",
          "must exceed the MTU");
  for (const auto& [start, t_phy] : c.link_handovers) {
    require(start >= 0 && t_phy > 0, "link.handovers", "need start >= 0 and t_phy > 0");
  }
  require(c.scheduler_stale_ms >= 0, "scheduler.stale_ms", "must be non-negative");
  require(c.cca_window_s > 0, "cca.window_s", "must be positive");
  require(c.cca_kappa >= 1, "cca.kappa", "must be at least 1");
  require(c.cca_beta > 0 && c.cca_beta < 1, "cca.beta", "must lie in (0, 1)");
  require(c.cca_gamma > 0 && c.cca_gamma <= 1, "cca.gamma", "must lie in (0, 1]");
  require(c.cca_d_base_ms >= 0, "cca.d_base_ms", "must be non-negative");
  require(c.cca_r_safe_kbps >= 0, "cca.r_safe_kbps", "must be non-negative");
  require(c.cca_r_min_kbps > 0 && c.cca_r_min_kbps <= c.cca_r_max_kbps, "cca.r_min_kbps",
          "must be positive and not above cca.r_max_kbps");
  require(c.cca_packet_size > 0, "cca.packet_size", "must be positive");
  require(c.transport_handshake_rtts >= -1, "transport.handshake_rtts", "must be >= -1");
  require(c.transport_max_datagram_size > 0 &&
              c.transport_max_datagram_size + c.transport_overlay_overhead <= c.link_mtu,
          "transport.max_datagram_size", "must fit the link MTU minus overlay overhead");
  require(c.transport_freshness_s > 0, "transport.freshness_s", "must be positive");
  require(c.c2_rate_hz > 0, "c2.rate_hz", "must be positive");
  require(c.c2_payload_bytes > 0 && c.c2_payload_bytes <= c.transport_max_datagram_size,
          "c2.payload_bytes", "must be positive and fit one datagram");
  require(c.video_fps > 0, "video.fps", "must be positive");
  require(c.video_jitter >= 0 && c.video_jitter < 1, "video.jitter", "must lie in [0, 1)");
  require(c.video_rate_control_s >= 0, "video.rate_control_s", "must be non-negative");
  require(c.video_initial_kbps > 0, "video.initial_kbps", "must be positive");
  require(c.sweep_lambda_c2 >= 0, "sweep.lambda_c2", "must be non-negative");
  require(c.sweep_mean_service_ms > 0, "sweep.mean_service_ms", "must be positive");
  require(!c.sweep_load_factors.empty(), "sweep.load_factors", "needs at least one value");
  for (double f : c.sweep_load_factors) {
    require(f >= 0, "sweep.load_factors", "must be non-negative");
  }
  require(c.sweep_duration_s > 0, "sweep.duration_s", "must be positive");
  require(c.sweep_q_low_packets > 0, "sweep.q_low_packets", "must be positive");
  if (c.kind == ScenarioKind::kPrioritySweep) {
    require(c.sweep_lambda_c2 * c.sweep_mean_service_ms / 1e3 < 1, "sweep.lambda_c2",
            "C2 load must stay below 1");
  }
}

LinkConfig MakeLinkConfig(const ScenarioConfig& c) {
  LinkConfig link;
  if (!c.link_trace_path.empty()) {
    try {
      link.capacity = LoadTraceFile(c.link_trace_path, c.link_mtu);
    } catch (const TraceParseError& e) {
      throw ConfigError("link.trace_path", e.what());
    }
  } else {
    std::vector<RateStep> steps;
    for (const auto& [start, mbps] : c.link_rate_mbps) {
      steps.push_back(RateStep{AtSeconds(start), mbps * 1e6});
    }
    link.capacity = std::move(steps);
  }
  link.one_way_delay = Millis(c.link_delay_ms);
  link.loss_rate = c.link_loss;
  link.queue_capacity_bytes = c.link_queue_bytes;
  link.mtu_bytes = c.link_mtu;
  for (const auto& [start, t_phy] : c.link_handovers) {
    link.handovers.push_back(HandoverWindow{AtSeconds(start), Millis(t_phy)});
  }
  link.seed = c.seed * 0x9E3779B97F4A7C15ULL + 1;
  return link;
}

SchedulerConfig MakeSchedulerConfig(const ScenarioConfig& c) {
  SchedulerConfig s;
  s.mode = c.scheduler_mode;
  s.q_low_capacity_bytes = c.scheduler_q_low_bytes;
  if (c.scheduler_stale_ms > 0) {
    s.stale_after = Millis(c.scheduler_stale_ms);
  } else {
    s.stale_after.reset();
  }
  return s;
}

CcaConfig MakeCcaConfig(const ScenarioConfig& c) {
  CcaConfig cca;
  cca.window = Seconds(c.cca_window_s);
  cca.kappa = c.cca_kappa;
  cca.beta = c.cca_beta;
  cca.d_base = Millis(c.cca_d_base_ms);
  cca.packet_size = c.cca_packet_size;
  cca.initial_cwnd_bytes = c.cca_initial_cwnd_bytes;
  cca.credit_cap_bytes = c.cca_credit_cap_bytes;
  cca.initial_rate_bps = c.cca_initial_kbps * 1e3;
  cca.coupler.gamma = c.cca_gamma;
  cca.coupler.r_safe_bps = c.cca_r_safe_kbps * 1e3;
  cca.coupler.r_min_bps = c.cca_r_min_kbps * 1e3;
  cca.coupler.r_max_bps = c.cca_r_max_kbps * 1e3;
  return cca;
}

TransportConfig MakeTransportConfig(const ScenarioConfig& c) {
  TransportConfig t;
  t.resumption_mode = c.transport_resumption_mode;
  if (c.transport_handshake_rtts >= 0) t.handshake_rtts = c.transport_handshake_rtts;
  t.session_ticket = c.transport_session_ticket;
  t.max_datagram_size = c.transport_max_datagram_size;
  t.link_mtu = c.link_mtu;
  t.overlay_overhead = c.transport_overlay_overhead;
  t.freshness_horizon = Seconds(c.transport_freshness_s);
  t.unified_congestion = c.transport_unified;
  t.c2_over_datagram = c.transport_c2_over_datagram;
  return t;
}

C2SourceConfig MakeC2Config(const ScenarioConfig& c) {
  return C2SourceConfig{c.c2_rate_hz, c.c2_payload_bytes};
}

VideoSourceConfig MakeVideoConfig(const ScenarioConfig& c) {
  VideoSourceConfig v;
  v.fps = c.video_fps;
  v.initial_bitrate_bps = c.video_saturate ? c.cca_r_max_kbps * 1e3 : c.video_initial_kbps * 1e3;
  v.jitter = c.video_jitter;
  v.rate_control_s = c.video_rate_control_s;
  v.max_datagram_size = c.transport_max_datagram_size;
  v.r_min_bps = c.cca_r_min_kbps * 1e3;
  v.r_max_bps = c.cca_r_max_kbps * 1e3;
  if (c.scheduler_stale_ms > 0) v.deadline_age = Millis(c.scheduler_stale_ms);
  v.seed = c.seed * 0xBF58476D1CE4E5B9ULL + 7;
  return v;
}

const std::vector<BundledScenario>& BundledScenarios() {
  static const std::vector<BundledScenario> bundled = {
      {"headroom_drop", "5 Mbps link throttled to 1 Mbps at t=10 s, 120 ms RTT",
       R"(name = headroom_drop
description = 5 Mbps link throttled to 1 Mbps at t=10 s, 120 ms RTT
kind = stream
duration_s = 40
link.rate_mbps = 0:5,10:1
link.delay_ms = 60
video.initial_kbps = 3000
)"},
      {"0rtt_120ms", "repeated handovers at 120 ms RTT, 0-RTT resumption vs TCP/TLS",
       R"(name = 0rtt_120ms
description = repeated handovers at 120 ms RTT, 0-RTT resumption vs TCP/TLS
kind = handover
duration_s = 62
link.rate_mbps = 10
link.delay_ms = 60
link.handovers = 6:16,12:16,18:16,24:16,30:16,36:16,42:16,48:16,54:16,60:16
video.initial_kbps = 2000
baseline.link.handovers = 6:21,12:21,18:21,24:21,30:21,36:21,42:21,48:21,54:21,60:21
)"},
      {"0rtt_20ms", "repeated handovers at 20 ms RTT, 0-RTT resumption vs TCP/TLS",
       R"(name = 0rtt_20ms
description = repeated handovers at 20 ms RTT, 0-RTT resumption vs TCP/TLS
kind = handover
duration_s = 62
link.rate_mbps = 10
link.delay_ms = 10
link.handovers = 6:25,12:25,18:25,24:25,30:25,36:25,42:25,48:25,54:25,60:25
video.initial_kbps = 2000
baseline.link.handovers = 6:15,12:15,18:15,24:15,30:15,36:15,42:15,48:15,54:15,60:15
)"},
      {"c2_integrity", "10% random loss under saturating video; stream C2 vs raw datagrams",
       R"(name = c2_integrity
description = 10% random loss under saturating video; stream C2 vs raw datagrams
kind = stream
duration_s = 120
drain_s = 10
link.rate_mbps = 3
link.delay_ms = 60
link.loss = 0.1
video.saturate = true
baseline.scheduler.mode = strict_priority
baseline.transport.unified = true
baseline.transport.c2_over_datagram = true
)"},
      {"bw_3mbps_120ms", "static 3 Mbps bottleneck with 120 ms RTT",
       R"(name = bw_3mbps_120ms
description = static 3 Mbps bottleneck with 120 ms RTT
kind = stream
duration_s = 60
link.rate_mbps = 3
link.delay_ms = 60
video.initial_kbps = 2000
)"},
      {"priority_sweep", "C2 waiting time vs video load on a 2 Mbps link, priority vs FIFO",
       R"(name = priority_sweep
description = C2 waiting time vs video load on a 2 Mbps link, priority vs FIFO
kind = priority_sweep
link.rate_mbps = 2
link.delay_ms = 0
sweep.lambda_c2 = 10
sweep.mean_service_ms = 6
sweep.load_factors = 0.5,0.9,2
sweep.duration_s = 10000
)"},
  };
  return bundled;
}

std::vector<ScenarioListing> ListScenarios(const std::string& custom_dir) {
  std::vector<ScenarioListing> out;
  std::set<std::string> names;
  for (const auto& b : BundledScenarios()) {
    out.push_back({std::string(b.name), std::string(b.description), "bundled"});
    names.insert(std::string(b.name));
  }
  if (custom_dir.empty()) return out;
  namespace fs = std::filesystem;
  if (!fs::is_directory(custom_dir)) {
    throw ConfigError("", "scenario directory '" + custom_dir + "' does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(custom_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".conf") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    ScenarioConfig c = LoadScenarioFile(path.string());
    if (!names.insert(c.name).second) {
      throw ConfigError("name", "duplicate scenario name '" + c.name + "' in " + path.string());
    }
    out.push_back({c.name, c.description, path.string()});
  }
  return out;
}

ScenarioConfig ResolveScenario(const std::string& name_or_path) {
  if (std::filesystem::exists(name_or_path)) return LoadScenarioFile(name_or_path);
  for (const auto& b : BundledScenarios()) {
    if (b.name == name_or_path) return ParseScenarioText(b.text);
  }
  throw ConfigError("", "no config file or bundled scenario named '" + name_or_path + "'");
}

}  // namespace aquila
