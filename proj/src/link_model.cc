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

#include "aquila/link_model.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "aquila/errors.h"

namespace aquila {
namespace {

constexpr Duration kDefaultQueueDelay = std::chrono::milliseconds(250);
constexpr Duration kCapacityWindow = std::chrono::seconds(1);

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

Duration LinkTrace::period() const {
  const std::int64_t last = opportunities_ms.empty() ? 1 : opportunities_ms.back();
  return std::chrono::milliseconds(std::max<std::int64_t>(last, 1));
}

SimTime LinkTrace::OpportunityTime(std::int64_t k) const {
  const auto n = static_cast<std::int64_t>(opportunities_ms.size());
  const std::int64_t cycle = k / n;
  const std::int64_t idx = k % n;
  return kSimStart + cycle * period() +
         std::chrono::milliseconds(opportunities_ms[static_cast<std::size_t>(idx)]);
}

std::int64_t LinkTrace::OpportunitiesBefore(SimTime t) const {
  const auto n = static_cast<std::int64_t>(opportunities_ms.size());
  const std::int64_t p = period().count();
  const std::int64_t us = ToMicros(t);
  if (us <= 0) return 0;
  const std::int64_t cycle = us / p;
  const std::int64_t rem = us % p;
  // Entries with ts*1000 < rem.
  const auto within = std::lower_bound(opportunities_ms.begin(), opportunities_ms.end(), rem,
                                       [](std::int64_t ts_ms, std::int64_t r) {
                                         return ts_ms * 1000 < r;
                                       }) -
                      opportunities_ms.begin();
  return cycle * n + within;
}

double LinkTrace::AverageBitsPerSecond() const {
  return static_cast<double>(opportunities_ms.size()) * mtu_bytes * 8.0 / ToSeconds(period());
}

LinkTrace LoadTrace(std::istream& source, std::uint32_t mtu_bytes) {
  if (mtu_bytes == 0) throw ContractViolation("trace MTU must be positive");
  LinkTrace trace;
  trace.mtu_bytes = mtu_bytes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    const std::string_view text = Trim(line);
    if (text.empty()) continue;
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
      throw TraceParseError(line_no, "expected a non-negative integer millisecond, got '" +
                                         std::string(text) + "'");
    }
    if (!trace.opportunities_ms.empty() && value < trace.opportunities_ms.back()) {
      throw TraceParseError(line_no, "timestamp " + std::to_string(value) +
                                         " decreases from " +
                                         std::to_string(trace.opportunities_ms.back()));
    }
    trace.opportunities_ms.push_back(value);
  }
  if (trace.opportunities_ms.empty()) throw TraceParseError(line_no, "trace is empty");
  return trace;
}

LinkTrace LoadTraceFile(const std::string& path, std::uint32_t mtu_bytes) {
  std::ifstream in(path);
  if (!in) throw TraceParseError(0, "cannot open trace file '" + path + "'");
  return LoadTrace(in, mtu_bytes);
}

LinkConfig LinkConfig::Constant(double bits_per_second, Duration one_way_delay) {
  LinkConfig config;
  config.capacity = std::vector<RateStep>{{kSimStart, bits_per_second}};
  config.one_way_delay = one_way_delay;
  return config;
}

Link::Link(EventQueue& events, LinkConfig config)
    : events_(events), config_(std::move(config)), rng_(config_.seed) {
  if (config_.loss_rate < 0.0 || config_.loss_rate > 1.0) {
    throw ContractViolation("loss_rate must lie in [0,1]");
  }
  if (config_.mtu_bytes == 0) throw ContractViolation("mtu must be positive");
  loss_ = std::bernoulli_distribution(config_.loss_rate);
  if (auto* steps = std::get_if<std::vector<RateStep>>(&config_.capacity)) {
    if (steps->empty() || steps->front().start != kSimStart) {
      throw ContractViolation("rate schedule must start at t=0");
    }
    for (std::size_t i = 1; i < steps->size(); ++i) {
      if ((*steps)[i].start <= (*steps)[i - 1].start) {
        throw ContractViolation("rate schedule must be strictly increasing in time");
      }
    }
    for (const auto& s : *steps) {
      if (s.bits_per_second < 0) throw ContractViolation("negative link rate");
    }
  } else {
    auto& trace = std::get<LinkTrace>(config_.capacity);
    if (trace.opportunities_ms.empty()) throw ContractViolation("empty link trace");
    trace.mtu_bytes = config_.mtu_bytes;
  }
  queue_capacity_bytes_ = config_.queue_capacity_bytes;
  if (queue_capacity_bytes_ == 0) {
    const double initial_bps = CapacityAt(kSimStart);
    queue_capacity_bytes_ = std::max<std::uint64_t>(
        static_cast<std::uint64_t>(initial_bps * ToSeconds(kDefaultQueueDelay) / 8.0),
        2ull * config_.mtu_bytes);
  }
  if (queue_capacity_bytes_ <= config_.mtu_bytes) {
    throw ContractViolation("queue capacity must exceed the MTU");
  }
  for (const auto& h : config_.handovers) InjectHandover(h.start, h.t_phy);
}

bool Link::Send(const TransportFrame& frame) {
  if (frame.size_bytes() > config_.mtu_bytes) {
    throw ContractViolation("frame of " + std::to_string(frame.size_bytes()) +
                            " bytes exceeds link MTU " + std::to_string(config_.mtu_bytes));
  }
  if (frame.size_bytes() == 0) throw ContractViolation("empty frame");
  ++counters_.packets_in;
  if (InBlackout(events_.now())) {
    ++counters_.blackout_dropped;
    return false;
  }
  if (occupancy_bytes_ + frame.size_bytes() > queue_capacity_bytes_) {
    ++counters_.tail_dropped;
    return false;
  }
  queue_.push_back(frame);
  occupancy_bytes_ += frame.size_bytes();
  if (!in_service_) StartService();
  return true;
}

void Link::SendReverse(std::function<void()> on_arrival) {
  ++counters_.reverse_sent;
  if (InBlackout(events_.now())) {
    ++counters_.reverse_blackout_dropped;
    return;
  }
  const std::uint32_t epoch = epoch_;
  events_.ScheduleIn(config_.one_way_delay, ComponentId::kLink, EventKind::kAck,
                     [this, epoch, fn = std::move(on_arrival)] {
                       if (epoch != epoch_) {
                         ++counters_.reverse_blackout_dropped;
                         return;
                       }
                       ++counters_.reverse_delivered;
                       fn();
                     });
}

void Link::StartService() {
  if (queue_.empty()) return;
  const SimTime now = events_.now();
  const SimTime finish = ServiceEnd(now, queue_.front().size_bytes());
  in_service_ = InService{now, finish};
  service_ticket_ = events_.ScheduleAt(finish, ComponentId::kLink, EventKind::kTimer,
                                       [this] { CompleteService(); });
}

void Link::CompleteService() {
  in_service_.reset();
  TransportFrame frame = std::move(queue_.front());
  queue_.pop_front();
  occupancy_bytes_ -= frame.size_bytes();
  if (config_.loss_rate > 0.0 && loss_(rng_)) {
    ++counters_.loss_dropped;
  } else {
    ++in_transit_;
    const std::uint32_t epoch = epoch_;
    events_.ScheduleIn(config_.one_way_delay, ComponentId::kLink, EventKind::kDelivery,
                       [this, epoch, f = std::move(frame)] {
                         --in_transit_;
                         if (epoch != epoch_ || InBlackout(events_.now())) {
                           ++counters_.blackout_dropped;
                           return;
                         }
                         ++counters_.delivered;
                         counters_.bytes_delivered += f.size_bytes();
                         if (receiver_) receiver_(f);
                       });
  }
  if (!queue_.empty()) {
    StartService();
  } else if (on_idle_) {
    on_idle_();
  }
}

SimTime Link::ServiceEnd(SimTime start, std::uint32_t bytes) {
  if (std::holds_alternative<LinkTrace>(config_.capacity)) return ServiceEndTrace(start, bytes);
  return ServiceEndSteps(start, bytes);
}

SimTime Link::ServiceEndSteps(SimTime start, std::uint32_t bytes) const {
  const auto& steps = std::get<std::vector<RateStep>>(config_.capacity);
  auto it = std::upper_bound(steps.begin(), steps.end(), start,
                             [](SimTime t, const RateStep& s) { return t < s.start; });
  --it;
  double remaining_bits = static_cast<double>(bytes) * 8.0;
  SimTime t = start;
  for (;; ++it) {
    const bool last = std::next(it) == steps.end();
    const double rate = it->bits_per_second;
    if (rate > 0) {
      const Duration needed{
          static_cast<std::int64_t>(std::ceil(remaining_bits * 1e6 / rate - 1e-6))};
      if (last || t + needed <= std::next(it)->start) return t + needed;
    } else if (last) {
      throw ContractViolation("link rate is zero forever; frame can never be served");
    }
    const SimTime seg_end = std::next(it)->start;
    remaining_bits -= rate * ToSeconds(seg_end - t);
    t = seg_end;
  }
}

SimTime Link::ServiceEndTrace(SimTime start, std::uint32_t bytes) {
  const auto& trace = std::get<LinkTrace>(config_.capacity);
  std::uint32_t remaining = bytes;
  if (leftover_bytes_ > 0 && leftover_at_ == start) {
    const std::uint32_t used = std::min(remaining, leftover_bytes_);
    remaining -= used;
    leftover_bytes_ -= used;
    if (remaining == 0) return start;
  }
  while (trace.OpportunityTime(next_opportunity_) < start) ++next_opportunity_;
  for (;;) {
    const SimTime t = trace.OpportunityTime(next_opportunity_++);
    if (remaining <= trace.mtu_bytes) {
      leftover_bytes_ = trace.mtu_bytes - remaining;
      leftover_at_ = t;
      return t;
    }
    remaining -= trace.mtu_bytes;
  }
}

double Link::CapacityAt(SimTime t) const {
  if (InBlackout(t)) return 0.0;
  if (const auto* trace = std::get_if<LinkTrace>(&config_.capacity)) {
    const std::int64_t count =
        trace->OpportunitiesBefore(t + kCapacityWindow) - trace->OpportunitiesBefore(t);
    return static_cast<double>(count) * trace->mtu_bytes * 8.0 / ToSeconds(kCapacityWindow);
  }
  const auto& steps = std::get<std::vector<RateStep>>(config_.capacity);
  auto it = std::upper_bound(steps.begin(), steps.end(), t,
                             [](SimTime x, const RateStep& s) { return x < s.start; });
  if (it == steps.begin()) return steps.front().bits_per_second;
  return std::prev(it)->bits_per_second;
}

void Link::InjectHandover(SimTime start, Duration t_phy) {
  if (start < events_.now()) throw ContractViolation("handover scheduled in the past");
  if (t_phy <= Duration::zero()) throw ContractViolation("t_phy must be positive");
  const HandoverWindow window{start, t_phy};
  for (const auto& h : handovers_) {
    if (window.start < h.end() && h.start < window.end()) {
      throw ContractViolation("handover windows overlap");
    }
  }
  handovers_.push_back(window);
  std::sort(handovers_.begin(), handovers_.end(),
            [](const HandoverWindow& a, const HandoverWindow& b) { return a.start < b.start; });
  events_.ScheduleAt(window.start, ComponentId::kLink, EventKind::kHandoverStart,
                     [this, window] { BeginBlackout(window); });
  events_.ScheduleAt(window.end(), ComponentId::kLink, EventKind::kHandoverEnd,
                     [this, window] { EndBlackout(window); });
}

bool Link::InBlackout(SimTime t) const {
  for (const auto& h : handovers_) {
    if (h.start <= t && t < h.end()) return true;
    if (h.start > t) break;
  }
  return false;
}

void Link::BeginBlackout(const HandoverWindow& window) {
  ++epoch_;
  if (in_service_) {
    events_.Cancel(service_ticket_);
    in_service_.reset();
  }
  counters_.blackout_dropped += queue_.size();
  queue_.clear();
  occupancy_bytes_ = 0;
  if (blackout_listener_) blackout_listener_(true, window);
}

void Link::EndBlackout(const HandoverWindow& window) {
  if (blackout_listener_) blackout_listener_(false, window);
  if (!queue_.empty() && !in_service_) StartService();
}

Duration Link::ResidualService(SimTime now) const {
  if (!in_service_ || in_service_->finish <= now) return Duration::zero();
  return in_service_->finish - now;
}

}  // namespace aquila
