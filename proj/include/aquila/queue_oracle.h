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

#ifndef AQUILA_QUEUE_ORACLE_H_
#define AQUILA_QUEUE_ORACLE_H_

#include <chrono>
#include <cstdint>
#include <optional>

namespace aquila {

using FloatSeconds = std::chrono::duration<double>;

// Inputs to the closed-form C2 waiting-time estimate.
struct QueueOracleParams {
  double lambda_c2 = 0;   // arrivals/s
  double lambda_vid = 0;  // arrivals/s
  double mu = 0;          // services/s
  FloatSeconds mean_service{0};
  double rho_c2 = 0;
  double rho_total = 0;
  // Residual service seen by an arriving C2 packet; when empty the
  // deterministic-service value min(1, rho_total) * S / 2 is used.
  std::optional<FloatSeconds> residual;

  static QueueOracleParams From(double lambda_c2, double lambda_vid, FloatSeconds mean_service);
};

// rho_c2 * S / (1 - rho_c2) + R. Throws ContractViolation when rho_c2 >= 1.
FloatSeconds DecouplingPrediction(const QueueOracleParams& params);

enum class ServiceDistribution : std::uint8_t { kExponential, kDeterministic };

struct PriorityOracleResult {
  std::optional<FloatSeconds> mean_wait;  // empty when no C2 packet arrived
  std::uint64_t samples = 0;
  double busy_fraction = 0;
};

// Standalone two-class non-preemptive priority queue with Poisson arrivals
// (M/M/1 by default). Reports the mean time high-class packets wait before
// service starts. Shares no code with the scheduler it is used to check.
PriorityOracleResult MmPriorityOracle(
    double lambda_c2, double lambda_vid, FloatSeconds mean_service, FloatSeconds duration,
    std::uint64_t seed = 1, ServiceDistribution service = ServiceDistribution::kExponential);

}  // namespace aquila

#endif  // AQUILA_QUEUE_ORACLE_H_
