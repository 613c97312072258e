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

#ifndef AQUILA_SCENARIO_H_
#define AQUILA_SCENARIO_H_

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aquila/congestion.h"
#include "aquila/link_model.h"
#include "aquila/scheduler.h"
#include "aquila/traffic.h"
#include "aquila/transport.h"

namespace aquila {

enum class ScenarioKind : std::uint8_t { kStream, kHandover, kPrioritySweep };

std::string_view ToString(ScenarioKind kind);

// A declarative experiment. Every field has a default; the flat text form
// uses the dotted keys listed by ScenarioKeys().
struct ScenarioConfig {
  std::string name = "custom";
  std::string description;
  ScenarioKind kind = ScenarioKind::kStream;
  double duration_s = 30.0;
  double drain_s = 5.0;
  std::uint64_t seed = 1;

  // (start_s, mbps) steps; the first must start at 0.
  std::vector<std::pair<double, double>> link_rate_mbps{{0.0, 12.0}};
  std::string link_trace_path;
  double link_delay_ms = 60.0;  // one way
  double link_loss = 0.0;
  std::uint64_t link_queue_bytes = 0;
  std::uint32_t link_mtu = 1500;
  // (start_s, t_phy_ms)
  std::vector<std::pair<double, double>> link_handovers;

  SchedulerMode scheduler_mode = SchedulerMode::kStrictPriority;
  std::uint64_t scheduler_q_low_bytes = 25'000;
  double scheduler_stale_ms = 200.0;  // 0 disables

  double cca_window_s = 20.0;
  double cca_kappa = 1.5;
  double cca_beta = 0.5;
  double cca_gamma = 0.9;
  double cca_d_base_ms = 40.0;
  double cca_r_safe_kbps = 15.0;
  double cca_r_min_kbps = 300.0;
  double cca_r_max_kbps = 10'000.0;
  std::uint32_t cca_packet_size = 1200;
  double cca_initial_cwnd_bytes = 0.0;
  double cca_credit_cap_bytes = 0.0;
  double cca_initial_kbps = 1000.0;

  ResumptionMode transport_resumption_mode = ResumptionMode::kZeroRtt;
  int transport_handshake_rtts = -1;  // -1 selects the mode default
  bool transport_session_ticket = true;
  std::uint32_t transport_max_datagram_size = 1200;
  std::uint32_t transport_overlay_overhead = 80;
  double transport_freshness_s = 3.0;
  bool transport_unified = true;
  bool transport_c2_over_datagram = false;

  double c2_rate_hz = 10.0;
  std::uint32_t c2_payload_bytes = 185;

  bool video_enabled = true;
  double video_fps = 30.0;
  double video_initial_kbps = 3000.0;
  double video_jitter = 0.2;
  double video_rate_control_s = 0.5;
  // Encoder ignores rate feedback and offers r_max.
  bool video_saturate = false;

  double sweep_lambda_c2 = 10.0;
  double sweep_mean_service_ms = 6.0;
  std::vector<double> sweep_load_factors{0.5, 0.9, 2.0};
  double sweep_duration_s = 10'000.0;
  // Video queue limit in packets for both sweep arms; the byte budget is
  // lifted so admission does not depend on the sampled packet size.
  std::uint64_t sweep_q_low_packets = 1000;

  // Raw "key = value" overrides applied on top of the kind's default
  // baseline arm.
  std::map<std::string, std::string> baseline_overrides;
};

struct ScenarioKey {
  std::string_view key;
  std::string_view help;
};

// Every accepted key in declaration order.
std::vector<ScenarioKey> ScenarioKeys();

// Sets one key. Throws ConfigError naming the key on unknown keys or
// malformed values.
void SetScenarioKey(ScenarioConfig& config, std::string_view key, std::string_view value);

// Resolved key/value pairs (defaults expanded), in ScenarioKeys() order,
// followed by baseline.* overrides.
std::vector<std::pair<std::string, std::string>> ResolvedKeys(const ScenarioConfig& config);

// Parses `key = value` lines; '#' starts a comment. Keys under `baseline.`
// are validated and stored as overrides.
ScenarioConfig ParseScenario(std::istream& in);
ScenarioConfig LoadScenarioFile(const std::string& path);
ScenarioConfig ParseScenarioText(std::string_view text);

// The comparison arm: FIFO with isolated controllers for stream runs, the
// TCP/TLS handshake for handover runs; then the scenario's own overrides.
ScenarioConfig BaselineArm(const ScenarioConfig& config);

// Throws ConfigError when values are out of range.
void ValidateScenario(const ScenarioConfig& config);

LinkConfig MakeLinkConfig(const ScenarioConfig& config);
SchedulerConfig MakeSchedulerConfig(const ScenarioConfig& config);
CcaConfig MakeCcaConfig(const ScenarioConfig& config);
TransportConfig MakeTransportConfig(const ScenarioConfig& config);
C2SourceConfig MakeC2Config(const ScenarioConfig& config);
VideoSourceConfig MakeVideoConfig(const ScenarioConfig& config);

struct BundledScenario {
  std::string_view name;
  std::string_view description;
  std::string_view text;
};

const std::vector<BundledScenario>& BundledScenarios();

struct ScenarioListing {
  std::string name;
  std::string description;
  std::string source;  // "bundled" or a file path
};

// Bundled scenarios plus every *.conf in `custom_dir` (if non-empty).
// Throws ConfigError on a duplicate name.
std::vector<ScenarioListing> ListScenarios(const std::string& custom_dir = "");

// A bundled name or a path to a config file.
ScenarioConfig ResolveScenario(const std::string& name_or_path);

}  // namespace aquila

#endif  // AQUILA_SCENARIO_H_
