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


#include "aquila/queue_oracle.h"

#include <cmath>

#include <gtest/gtest.h>

#include "aquila/errors.h"

namespace aquila {
namespace {

constexpr double kMs = 1e-3;

TEST(QueueOracleTest, SingleClassMatchesTextbookWait) {
  // M/M/1 with rho = 0.6: E[W] = rho * S / (1 - rho).
  const FloatSeconds s(6 * kMs);
  const auto r = MmPriorityOracle(100.0, 0.0, s, FloatSeconds(10'000.0), 3);
  ASSERT_TRUE(r.mean_wait.has_value());
  EXPECT_GE(r.samples, 999'000u);
  const double expected = 0.6 * 6 * kMs / 0.4;
  EXPECT_NEAR(r.mean_wait->count(), expected, 0.05 * expected);
}

TEST(QueueOracleTest, NoC2ArrivalsMeansNoEstimate) {
  const auto r = MmPriorityOracle(0.0, 50.0, FloatSeconds(6 * kMs), FloatSeconds(100.0));
  EXPECT_EQ(r.samples, 0u);
  EXPECT_FALSE(r.mean_wait.has_value());
}

TEST(QueueOracleTest, HighClassWaitFlatAcrossVideoLoad) {
  // Deterministic service: the high-class wait depends on video only through
  // the residual term, which saturates once the server is always busy.
  const FloatSeconds s(1.2 * kMs);
  const double mu = 1.0 / s.count();
  const auto a = MmPriorityOracle(10.0, 2.0 * mu, s, FloatSeconds(4'000.0), 1,
                                  ServiceDistribution::kDeterministic);
  const auto b = MmPriorityOracle(10.0, 4.0 * mu, s, FloatSeconds(4'000.0), 2,
                                  ServiceDistribution::kDeterministic);
  ASSERT_TRUE(a.mean_wait && b.mean_wait);
  EXPECT_NEAR(a.mean_wait->count() / b.mean_wait->count(), 1.0, 0.05);
}

TEST(DecouplingPredictionTest, SaturatedDeterministicMatchesOracle) {
  const FloatSeconds s(1.2 * kMs);
  const double mu = 1.0 / s.count();
  const auto params = QueueOracleParams::From(10.0, 2.0 * mu, s);
  const double predicted = DecouplingPrediction(params).count();
  const auto oracle = MmPriorityOracle(10.0, 2.0 * mu, s, FloatSeconds(20'000.0), 5,
                                       ServiceDistribution::kDeterministic);
  ASSERT_GE(oracle.samples, 199'000u);
  EXPECT_NEAR(oracle.mean_wait->count(), predicted, 0.10 * predicted);
}

TEST(DecouplingPredictionTest, VanishingC2LoadLeavesResidual) {
  const FloatSeconds s(6 * kMs);
  auto params = QueueOracleParams::From(1e-6, 10.0 / s.count(), s);
  EXPECT_NEAR(DecouplingPrediction(params).count(), 3 * kMs, 1e-8);
}

TEST(DecouplingPredictionTest, IdleLinkIsZero) {
  const auto params = QueueOracleParams::From(0.0, 0.0, FloatSeconds(6 * kMs));
  EXPECT_DOUBLE_EQ(DecouplingPrediction(params).count(), 0.0);
}

TEST(DecouplingPredictionTest, UnstableC2LoadIsRejected) {
  const auto params = QueueOracleParams::From(200.0, 0.0, FloatSeconds(6 * kMs));
  EXPECT_THROW(DecouplingPrediction(params), ContractViolation);
}

TEST(DecouplingPredictionTest, MeasuredResidualOverridesDefault) {
  auto params = QueueOracleParams::From(10.0, 100.0, FloatSeconds(6 * kMs));
  params.residual = FloatSeconds(5 * kMs);
  const double rho = 10.0 * 6 * kMs;
  EXPECT_NEAR(DecouplingPrediction(params).count(), rho * 6 * kMs / (1 - rho) + 5 * kMs, 1e-12);
}

}  // namespace
}  // namespace aquila
