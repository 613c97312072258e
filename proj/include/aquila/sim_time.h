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

#ifndef AQUILA_SIM_TIME_H_
#define AQUILA_SIM_TIME_H_

#include <chrono>
#include <cstdint>

namespace aquila {

// Virtual time. Integer microseconds keep long runs drift-free.
using Duration = std::chrono::microseconds;

struct SimClock {
  using rep = Duration::rep;
  using period = Duration::period;
  using duration = Duration;
  using time_point = std::chrono::time_point<SimClock, Duration>;
  static constexpr bool is_steady = true;
};

using SimTime = SimClock::time_point;

inline constexpr SimTime kSimStart{};

constexpr SimTime AtMicros(std::int64_t us) { return SimTime{Duration{us}}; }
constexpr SimTime AtMillis(std::int64_t ms) {
  return SimTime{std::chrono::milliseconds{ms}};
}
constexpr SimTime AtSeconds(double s) {
  return SimTime{Duration{static_cast<std::int64_t>(s * 1e6 + (s >= 0 ? 0.5 : -0.5))}};
}

constexpr Duration Millis(double ms) {
  return Duration{static_cast<std::int64_t>(ms * 1e3 + (ms >= 0 ? 0.5 : -0.5))};
}
constexpr Duration Seconds(double s) {
  return Duration{static_cast<std::int64_t>(s * 1e6 + (s >= 0 ? 0.5 : -0.5))};
}

constexpr double ToMillis(Duration d) { return static_cast<double>(d.count()) / 1e3; }
constexpr double ToSeconds(Duration d) { return static_cast<double>(d.count()) / 1e6; }
constexpr double ToMillis(SimTime t) { return ToMillis(t.time_since_epoch()); }
constexpr double ToSeconds(SimTime t) { return ToSeconds(t.time_since_epoch()); }
constexpr std::int64_t ToMicros(SimTime t) { return t.time_since_epoch().count(); }

// Time needed to push `bytes` through a link of `bits_per_second`, rounded up
// to the next whole microsecond.
inline Duration SerializationTime(std::uint64_t bytes, double bits_per_second) {
  const double us = static_cast<double>(bytes) * 8.0 * 1e6 / bits_per_second;
  auto whole = static_cast<std::int64_t>(us);
  if (static_cast<double>(whole) < us - 1e-6) ++whole;
  return Duration{whole};
}

}  // namespace aquila

#endif  // AQUILA_SIM_TIME_H_
