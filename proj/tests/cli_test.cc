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


#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status = -1;
  std::string output;
};

Outcome Invoke(const std::string& args) {
  const std::string cmd = std::string(AQUILA_SIM_PATH) + " " + args + " 2>&1";
  Outcome out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return out;
  char buf[512];
  while (fgets(buf, sizeof(buf), pipe) != nullptr) out.output += buf;
  const int raw = pclose(pipe);
  out.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

fs::path Scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("aquila_cli_" + name);
  fs::remove_all(p);
  return p;
}

TEST(CliTest, ListShowsBundledScenarios) {
  const auto r = Invoke("list");
  EXPECT_EQ(r.status, 0);
  for (const char* name : {"headroom_drop", "0rtt_120ms", "0rtt_20ms", "c2_integrity",
                           "bw_3mbps_120ms"}) {
    EXPECT_NE(r.output.find(name), std::string::npos) << name;
  }
}

TEST(CliTest, MalformedConfigExitsTwoAndNamesKey) {
  const auto r = Invoke(std::string("run ") + AQUILA_TEST_DATA_DIR + "/malformed.conf --out " +
                     Scratch("malformed").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("scheduler.mode"), std::string::npos) << r.output;
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Invoke("").status, 2);
  EXPECT_EQ(Invoke("run tiny").status, 2);
  EXPECT_EQ(Invoke("frobnicate").status, 2);
  EXPECT_EQ(Invoke("run no_such_scenario --out " + Scratch("missing").string()).status, 2);
}

TEST(CliTest, RunWritesReport) {
  const fs::path out = Scratch("run");
  const auto r = Invoke(std::string("run ") + AQUILA_TEST_DATA_DIR + "/tiny_stream.conf --out " +
                     out.string() + " --seed 5");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(fs::exists(out / "report.json"));
  EXPECT_TRUE(fs::exists(out / "aquila.queue_delay_ms.csv"));
  fs::remove_all(out);
}

TEST(CliTest, CompareWritesPairedReport) {
  const fs::path out = Scratch("compare");
  const auto r = Invoke(std::string("compare ") + AQUILA_TEST_DATA_DIR + "/tiny_stream.conf --out " +
                     out.string());
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(fs::exists(out / "baseline.cwnd_bytes.csv"));
  fs::remove_all(out);
}

}  // namespace
