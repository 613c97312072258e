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

#ifndef AQUILA_REPORT_H_
#define AQUILA_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "aquila/experiments.h"
#include "aquila/scenario.h"

namespace aquila {

inline constexpr int kReportSchemaVersion = 1;

enum class RunMode : std::uint8_t { kRun, kCompare };

// One CSV file: rows of (t_ms, value, series_id).
struct ReportSeries {
  std::string series_id;  // also the file stem
  std::vector<double> t_ms;
  std::vector<double> value;
};

struct RunReport {
  nlohmann::ordered_json document;
  std::vector<ReportSeries> series;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

// Runs every arm the scenario kind calls for and assembles the report.
// Stream scenarios run one arm under kRun and both arms under kCompare;
// handover and sweep scenarios always run their baseline alongside.
RunReport ExecuteScenario(const ScenarioConfig& config, RunMode mode);

std::string SerializeDocument(const RunReport& report);
std::string SerializeSeries(const ReportSeries& series);

// Writes report.json and one <series_id>.csv per series into `out_dir`,
// creating it if needed.
void WriteReport(const RunReport& report, const std::filesystem::path& out_dir);

}  // namespace aquila

#endif  // AQUILA_REPORT_H_
