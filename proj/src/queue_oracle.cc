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

#include <algorithm>
#include <deque>
#include <limits>
#include <random>

#include "aquila/errors.h"

namespace aquila {

QueueOracleParams QueueOracleParams::From(double lambda_c2, double lambda_vid,
                                          FloatSeconds mean_service) {
  QueueOracleParams p;
  p.lambda_c2 = lambda_c2;
  p.lambda_vid = lambda_vid;
  p.mean_service = mean_service;
  p.mu = mean_service.count() > 0 ? 1.0 / mean_service.count() : 0.0;
  p.rho_c2 = lambda_c2 * mean_service.count();
  p.rho_total = (lambda_c2 + lambda_vid) * mean_service.count();
  return p;
}

FloatSeconds DecouplingPrediction(const QueueOracleParams& params) {
  if (params.rho_c2 >= 1.0) throw ContractViolation("rho_c2 >= 1: C2 queue is unstable");
  const double s = params.mean_service.count();
  const FloatSeconds residual =
      params.residual ? *params.residual
                      : FloatSeconds(std::min(1.0, params.rho_total) * s / 2.0);
  return FloatSeconds(params.rho_c2 * s / (1.0 - params.rho_c2)) + residual;
}

PriorityOracleResult MmPriorityOracle(double lambda_c2, double lambda_vid,
                                      FloatSeconds mean_service, FloatSeconds duration,
                                      std::uint64_t seed, ServiceDistribution service) {
  if (lambda_c2 < 0 || lambda_vid < 0 || mean_service.count() <= 0) {
    throw ContractViolation("oracle rates must be non-negative and service positive");
  }
  constexpr double kNever = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> c2_gap(lambda_c2 > 0 ? lambda_c2 : 1.0);
  std::exponential_distribution<double> vid_gap(lambda_vid > 0 ? lambda_vid : 1.0);
  std::exponential_distribution<double> service_time(1.0 / mean_service.count());
  auto draw_service = [&] {
    return service == ServiceDistribution::kExponential ? service_time(rng)
                                                        : mean_service.count();
  };

  const double horizon = duration.count();
  double next_c2 = lambda_c2 > 0 ? c2_gap(rng) : kNever;
  double next_vid = lambda_vid > 0 ? vid_gap(rng) : kNever;
  bool busy = false;
  double busy_until = 0;
  double busy_time = 0;
  std::deque<double> high;  // arrival times
  std::uint64_t low_backlog = 0;
  double wait_sum = 0;
  std::uint64_t samples = 0;

  auto start_service = [&](double now) {
    const double s = draw_service();
    busy = true;
    busy_until = now + s;
    busy_time += s;
  };

  for (;;) {
    const double next_arrival = std::min(next_c2, next_vid);
    if (busy && busy_until <= next_arrival) {
      const double now = busy_until;
      busy = false;
      if (!high.empty()) {
        wait_sum += now - high.front();
        ++samples;
        high.pop_front();
        start_service(now);
      } else if (low_backlog > 0) {
        --low_backlog;
        start_service(now);
      }
      continue;
    }
    if (next_arrival > horizon) break;
    const double now = next_arrival;
    if (next_c2 <= next_vid) {
      next_c2 = now + c2_gap(rng);
      if (!busy) {
        ++samples;
        start_service(now);
      } else {
        high.push_back(now);
      }
    } else {
      next_vid = now + vid_gap(rng);
      if (!busy) {
        start_service(now);
      } else {
        ++low_backlog;
      }
    }
  }
  // Drain C2 still waiting at the horizon; low-class work ahead of it is
  // irrelevant under strict priority, only the packet in service matters.
  while (!high.empty()) {
    const double now = busy_until;
    wait_sum += now - high.front();
    ++samples;
    high.pop_front();
    busy_until = now + draw_service();
  }

  PriorityOracleResult result;
  result.samples = samples;
  if (samples > 0) result.mean_wait = FloatSeconds(wait_sum / static_cast<double>(samples));
  result.busy_fraction = horizon > 0 ? std::min(1.0, busy_time / horizon) : 0.0;
  return result;
}

}  // namespace aquila
