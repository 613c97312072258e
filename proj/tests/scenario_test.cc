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

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "aquila/errors.h"

namespace aquila {
namespace {

namespace fs = std::filesystem;

std::string ErrorKey(std::string_view text) {
  try {
    ParseScenarioText(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

TEST(ScenarioTest, ParsesDottedKeysAndComments) {
  const auto c = ParseScenarioText(R"(
# comment
name = demo
duration_s = 12.5
link.rate_mbps = 0:5, 10:1
link.handovers = 3:16
scheduler.mode = fifo
transport.resumption_mode = tcp_tls
c2.rate_hz = 20
)");
  EXPECT_EQ(c.name, "demo");
  EXPECT_DOUBLE_EQ(c.duration_s, 12.5);
  ASSERT_EQ(c.link_rate_mbps.size(), 2u);
  EXPECT_DOUBLE_EQ(c.link_rate_mbps[1].first, 10.0);
  EXPECT_DOUBLE_EQ(c.link_rate_mbps[1].second, 1.0);
  EXPECT_EQ(c.scheduler_mode, SchedulerMode::kFifo);
  EXPECT_EQ(c.transport_resumption_mode, ResumptionMode::kTcpTlsBaseline);
  EXPECT_DOUBLE_EQ(c.c2_rate_hz, 20.0);
  ASSERT_EQ(c.link_handovers.size(), 1u);
}

TEST(ScenarioTest, ErrorsNameTheOffendingKey) {
  EXPECT_EQ(ErrorKey("link.rate_mbs = 3\n"), "link.rate_mbs");
  EXPECT_EQ(ErrorKey("scheduler.mode = strict_prio\n"), "scheduler.mode");
  EXPECT_EQ(ErrorKey("cca.beta = half\n"), "cca.beta");
  EXPECT_EQ(ErrorKey("c2.rate_hz = 10\nc2.rate_hz = 20\n"), "c2.rate_hz");
  EXPECT_EQ(ErrorKey("cca.beta = 1.5\n"), "cca.beta");
  EXPECT_EQ(ErrorKey("link.loss = 2\n"), "link.loss");
}

TEST(ScenarioTest, EveryResolvedKeyIsDocumented) {
  std::set<std::string> documented;
  for (const auto& k : ScenarioKeys()) {
    EXPECT_FALSE(k.help.empty()) << k.key;
    documented.insert(std::string(k.key));
  }
  for (const auto& [key, value] : ResolvedKeys(ScenarioConfig{})) {
    EXPECT_TRUE(documented.count(key)) << key;
  }
}

TEST(ScenarioTest, ResolvedKeysRoundTrip) {
  const auto original = ResolveScenario("c2_integrity");
  std::string text;
  for (const auto& [key, value] : ResolvedKeys(original)) text += key + " = " + value + "\n";
  const auto again = ParseScenarioText(text);
  EXPECT_EQ(ResolvedKeys(again), ResolvedKeys(original));
}

TEST(ScenarioTest, BaselineArmDefaults) {
  const auto stream = BaselineArm(ResolveScenario("bw_3mbps_120ms"));
  EXPECT_EQ(stream.scheduler_mode, SchedulerMode::kFifo);
  EXPECT_FALSE(stream.transport_unified);

  const auto handover = BaselineArm(ResolveScenario("0rtt_120ms"));
  EXPECT_EQ(handover.transport_resumption_mode, ResumptionMode::kTcpTlsBaseline);
  ASSERT_FALSE(handover.link_handovers.empty());
  EXPECT_DOUBLE_EQ(handover.link_handovers[0].second, 21.0);

  const auto integrity = BaselineArm(ResolveScenario("c2_integrity"));
  EXPECT_EQ(integrity.scheduler_mode, SchedulerMode::kStrictPriority);
  EXPECT_TRUE(integrity.transport_unified);
  EXPECT_TRUE(integrity.transport_c2_over_datagram);
}

TEST(ScenarioTest, BundledListing) {
  std::set<std::string> names;
  for (const auto& s : ListScenarios()) {
    names.insert(s.name);
    EXPECT_FALSE(s.description.empty());
  }
  for (const char* n : {"headroom_drop", "0rtt_120ms", "0rtt_20ms", "c2_integrity",
                        "bw_3mbps_120ms"}) {
    EXPECT_TRUE(names.count(n)) << n;
  }
  for (const auto& b : BundledScenarios()) EXPECT_NO_THROW(ValidateScenario(ResolveScenario(std::string(b.name))));
}

TEST(ScenarioTest, CustomDirectory) {
  const fs::path dir = fs::temp_directory_path() / "aquila_scenario_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  EXPECT_EQ(ListScenarios(dir.string()).size(), BundledScenarios().size());

  std::ofstream(dir / "mine.conf") << "name = mine\ndescription = custom\n";
  const auto with_custom = ListScenarios(dir.string());
  ASSERT_EQ(with_custom.size(), BundledScenarios().size() + 1);
  EXPECT_EQ(with_custom.back().name, "mine");

  std::ofstream(dir / "clash.conf") << "name = headroom_drop\n";
  EXPECT_THROW(ListScenarios(dir.string()), ConfigError);
  fs::remove_all(dir);
}

TEST(ScenarioTest, TraceLinkLoadsFromFile) {
  auto c = ParseScenarioText("link.trace_path = " AQUILA_TEST_DATA_DIR "/step_trace.txt\n");
  const auto link = MakeLinkConfig(c);
  ASSERT_TRUE(std::holds_alternative<LinkTrace>(link.capacity));
  EXPECT_EQ(std::get<LinkTrace>(link.capacity).opportunities_ms.size(), 10u);
  c.link_trace_path = "/nonexistent/trace";
  EXPECT_THROW(MakeLinkConfig(c), ConfigError);
}

TEST(ScenarioTest, OversizedDatagramLimitRejected) {
  EXPECT_EQ(ErrorKey("transport.max_datagram_size = 1450\n"), "transport.max_datagram_size");
}

}  // namespace
}  // namespace aquila
