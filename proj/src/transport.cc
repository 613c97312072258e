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

#include "aquila/transport.h"

#include <algorithm>
#include <string>

#include "aquila/errors.h"

namespace aquila {
namespace {

constexpr Duration kLateAckHorizon = std::chrono::seconds(10);

}  // namespace

std::string_view ToString(ResumptionMode mode) {
  switch (mode) {
    case ResumptionMode::kZeroRtt: return "zero_rtt";
    case ResumptionMode::kFullHandshake: return "full_handshake";
    case ResumptionMode::kTcpTlsBaseline: return "tcp_tls";
  }
  return "unknown";
}

std::string_view ToString(ConnectionPhase phase) {
  switch (phase) {
    case ConnectionPhase::kEstablished: return "established";
    case ConnectionPhase::kBlackout: return "blackout";
    case ConnectionPhase::kHandshaking: return "handshaking";
    case ConnectionPhase::kResuming: return "resuming";
  }
  return "unknown";
}

std::string_view ToString(ReplayGuard::Verdict verdict) {
  switch (verdict) {
    case ReplayGuard::Verdict::kAccept: return "accept";
    case ReplayGuard::Verdict::kDiscardDuplicate: return "discard_duplicate";
    case ReplayGuard::Verdict::kDiscardStale: return "discard_stale";
  }
  return "unknown";
}

int DefaultHandshakeRtts(ResumptionMode mode) {
  switch (mode) {
    case ResumptionMode::kZeroRtt: return 0;
    case ResumptionMode::kFullHandshake: return 1;
    case ResumptionMode::kTcpTlsBaseline: return 2;  // TCP SYN/ACK + TLS 1.3
  }
  return 1;
}

void ValidateTransportConfig(const TransportConfig& config) {
  if (config.overlay_overhead >= config.link_mtu) {
    throw ContractViolation("overlay overhead leaves no room in the link MTU");
  }
  if (config.max_datagram_size == 0 ||
      config.max_datagram_size > config.link_mtu - config.overlay_overhead) {
    throw ContractViolation("max_datagram_size " + std::to_string(config.max_datagram_size) +
                            " does not fit link MTU " + std::to_string(config.link_mtu) +
                            " minus overlay overhead " +
                            std::to_string(config.overlay_overhead));
  }
  if (config.handshake_rtts && *config.handshake_rtts < 0) {
    throw ContractViolation("handshake_rtts must be non-negative");
  }
}

ReplayGuard::Verdict ReplayGuard::Check(const Packet& p, SimTime now) {
  auto& highest = highest_[static_cast<std::size_t>(p.cls)];
  if (highest && p.seq <= *highest) return Verdict::kDiscardDuplicate;
  if (now - p.tx_time > horizon_) return Verdict::kDiscardStale;
  highest = p.seq;
  return Verdict::kAccept;
}

// ---------------------------------------------------------------------------

SenderEndpoint::SenderEndpoint(EventQueue& events, Link& link, PriorityScheduler& scheduler,
                               ScreamFpvController& controller, TransportConfig config,
                               ScreamFpvController* c2_controller)
    : events_(events),
      link_(link),
      scheduler_(scheduler),
      controller_(controller),
      c2_controller_(c2_controller),
      config_(config) {
  ValidateTransportConfig(config_);
  if (!config_.unified_congestion && c2_controller_ == nullptr) {
    throw ContractViolation("isolated congestion control needs a dedicated C2 controller");
  }
  link_.set_blackout_listener(
      [this](bool started, const HandoverWindow& w) { OnBlackout(started, w); });
}

ScreamFpvController& SenderEndpoint::controller_for(TrafficClass cls) {
  if (!config_.unified_congestion && cls == TrafficClass::kC2) return *c2_controller_;
  return controller_;
}

std::uint64_t SenderEndpoint::bytes_in_flight() const {
  if (config_.unified_congestion) return controller_.bytes_in_flight();
  return controller_.bytes_in_flight() + c2_controller_->bytes_in_flight();
}

Duration SenderEndpoint::Rto() const {
  const ScreamFpvController& c =
      config_.unified_congestion ? controller_ : *c2_controller_;
  if (!c.srtt()) return config_.initial_rto;
  return std::max(2 * *c.srtt(), config_.rto_floor);
}

bool SenderEndpoint::StreamDrained() const {
  return segments_.empty() && scheduler_.high_size() == 0;
}

void SenderEndpoint::Submit(const Packet& p) {
  scheduler_.Ingest(p, events_.now());
  TrySend();
}

bool SenderEndpoint::Admit(const Packet& p) {
  if (p.cls == TrafficClass::kC2) {
    const SendDecision d = controller_for(TrafficClass::kC2).CanSend(p.size_bytes, p.cls);
    if (d == SendDecision::kSendViaCredit) ++stats_.credit_sends;
    return d != SendDecision::kBlocked;
  }
  if (!config_.unified_congestion) return true;
  return controller_.CanSend(p.size_bytes, p.cls) != SendDecision::kBlocked;
}

void SenderEndpoint::TrySend() {
  if (phase_ != ConnectionPhase::kEstablished) return;
  const SimTime now = events_.now();
  controller_.AccrueCredit(now);
  if (!config_.unified_congestion) c2_controller_->AccrueCredit(now);

  ScreamFpvController& c2 = controller_for(TrafficClass::kC2);
  while (!retransmit_.empty()) {
    const std::uint64_t offset = *retransmit_.begin();
    auto seg = segments_.find(offset);
    if (seg == segments_.end()) {
      retransmit_.erase(retransmit_.begin());
      continue;
    }
    const SendDecision d = c2.CanSend(seg->second.size_bytes, TrafficClass::kC2);
    if (d == SendDecision::kBlocked) return;  // strict priority: nothing overtakes C2
    if (d == SendDecision::kSendViaCredit) ++stats_.credit_sends;
    retransmit_.erase(retransmit_.begin());
    ++stats_.stream_retransmissions;
    Transmit(TransportFrame{Channel::kReliableStream, seg->second, 0, offset}, &c2);
  }

  auto batch = scheduler_.Dispatch(now, [this](const Packet& p) { return Admit(p); });
  for (const auto& d : batch) {
    if (d.packet.cls == TrafficClass::kC2 && !config_.c2_over_datagram) {
      StreamSend(d.packet);
    } else {
      DgramSend(d.packet);
    }
  }
}

bool SenderEndpoint::StreamSend(const Packet& p) {
  if (p.cls != TrafficClass::kC2) throw ContractViolation("only C2 rides the reliable stream");
  const std::uint64_t offset = next_offset_++;
  segments_.emplace(offset, p);
  ++stats_.stream_segments;
  if (phase_ != ConnectionPhase::kEstablished) {
    retransmit_.insert(offset);
    return false;
  }
  Transmit(TransportFrame{Channel::kReliableStream, p, 0, offset},
           &controller_for(TrafficClass::kC2));
  return true;
}

bool SenderEndpoint::DgramSend(const Packet& p) {
  if (p.size_bytes > config_.max_datagram_size) {
    ++stats_.datagrams_rejected;
    return false;
  }
  if (phase_ != ConnectionPhase::kEstablished) return false;
  ScreamFpvController* c = nullptr;
  if (config_.unified_congestion || p.cls == TrafficClass::kC2) c = &controller_for(p.cls);
  ++stats_.datagrams_sent;
  Transmit(TransportFrame{Channel::kUnreliableDatagram, p, 0, 0}, c);
  return true;
}

void SenderEndpoint::Transmit(TransportFrame frame, ScreamFpvController* controller) {
  const SimTime now = events_.now();
  frame.packet_number = next_pn_++;
  const std::uint32_t size = frame.size_bytes();
  const SimTime deadline = now + Rto();
  outstanding_.emplace(frame.packet_number, SentRecord{frame, now, deadline, controller});
  deadlines_.emplace(deadline, frame.packet_number);
  if (controller) controller->OnPacketSent(size);
  link_.Send(frame);
  ArmLossTimer();
}

void SenderEndpoint::ArmLossTimer() {
  if (deadlines_.empty()) {
    events_.Cancel(loss_timer_);
    return;
  }
  const SimTime at = deadlines_.begin()->first;
  if (loss_timer_.valid() && loss_timer_at_ == at) return;
  events_.Cancel(loss_timer_);
  loss_timer_at_ = at;
  loss_timer_ = events_.ScheduleAt(at, ComponentId::kTransport, EventKind::kTimer,
                                   [this] { OnLossTimer(); });
}

void SenderEndpoint::OnLossTimer() {
  loss_timer_ = EventQueue::Ticket();
  const SimTime now = events_.now();
  while (!deadlines_.empty() && deadlines_.begin()->first <= now) {
    const std::uint64_t pn = deadlines_.begin()->second;
    deadlines_.erase(deadlines_.begin());
    DeclareLost(pn);
  }
  ArmLossTimer();
  TrySend();
}

void SenderEndpoint::DeclareLost(std::uint64_t pn) {
  auto it = outstanding_.find(pn);
  if (it == outstanding_.end()) return;
  const SentRecord& r = it->second;
  if (r.controller) r.controller->OnPacketLost(r.frame.size_bytes());
  if (r.frame.channel == Channel::kReliableStream) {
    if (segments_.count(r.frame.stream_offset)) retransmit_.insert(r.frame.stream_offset);
  } else if (r.frame.channel == Channel::kUnreliableDatagram) {
    ++stats_.datagrams_lost;
  }
  if (r.controller) {
    presumed_lost_.insert(*it);
    while (!presumed_lost_.empty() &&
           presumed_lost_.begin()->second.sent_at < events_.now() - kLateAckHorizon) {
      presumed_lost_.erase(presumed_lost_.begin());
    }
  }
  outstanding_.erase(it);
}

void SenderEndpoint::OnAck(const AckFrame& ack) {
  if (ack.channel == Channel::kControl) {
    OnControlEcho(ack.packet_number);
    return;
  }
  const SimTime now = events_.now();
  last_ack_at_ = now;
  if (ack.channel == Channel::kReliableStream) {
    segments_.erase(ack.stream_offset);
    retransmit_.erase(ack.stream_offset);
  }
  auto it = outstanding_.find(ack.packet_number);
  if (it != outstanding_.end()) {
    const SentRecord& r = it->second;
    if (r.controller) r.controller->OnAck(now - r.sent_at, r.frame.size_bytes(), now);
    deadlines_.erase({r.deadline, ack.packet_number});
    outstanding_.erase(it);
    ArmLossTimer();
  } else if (auto late = presumed_lost_.find(ack.packet_number); late != presumed_lost_.end()) {
    ++stats_.late_acks;
    late->second.controller->OnAck(now - late->second.sent_at, 0, now);
    presumed_lost_.erase(late);
  } else {
    ++stats_.late_acks;
  }
  if (first_resumed_pn_ && ack.packet_number >= *first_resumed_pn_) {
    current_.first_confirmed = now;
    current_.t_phy = current_.link_up - current_.start;
    current_.t_handshake = current_.handshake_done - current_.link_up;
    current_.t_confirm = now - current_.handshake_done;
    current_.w_cb = now - current_.start;
    reports_.push_back(current_);
    first_resumed_pn_.reset();
  }
  TrySend();
}

void SenderEndpoint::Handover(Duration t_phy) {
  if (phase_ != ConnectionPhase::kEstablished) {
    throw ContractViolation("handover requested while connection is " +
                            std::string(ToString(phase_)));
  }
  link_.InjectHandover(events_.now(), t_phy);
}

void SenderEndpoint::OnBlackout(bool started, const HandoverWindow& window) {
  if (started) {
    phase_ = ConnectionPhase::kBlackout;
    current_ = BlackoutReport{};
    current_.start = window.start;
    current_.last_good_delivery = last_ack_at_;
    // Everything in flight dies with the radio link; stream data is resent
    // once the path is back.
    std::vector<std::uint64_t> pns;
    pns.reserve(outstanding_.size());
    for (const auto& [pn, r] : outstanding_) pns.push_back(pn);
    for (auto pn : pns) DeclareLost(pn);
    deadlines_.clear();
    presumed_lost_.clear();
    events_.Cancel(loss_timer_);
    events_.Cancel(probe_timer_);
    probe_pn_.reset();
    first_resumed_pn_.reset();
    return;
  }
  current_.link_up = events_.now();
  phase_ = ConnectionPhase::kHandshaking;
  ResumptionMode mode = config_.resumption_mode;
  if (mode == ResumptionMode::kZeroRtt && !config_.session_ticket) {
    mode = ResumptionMode::kFullHandshake;
    current_.fell_back = true;
  }
  current_.mode = mode;
  handshake_remaining_ =
      config_.handshake_rtts && !current_.fell_back ? *config_.handshake_rtts
                                                    : DefaultHandshakeRtts(mode);
  current_.handshake_rtts = handshake_remaining_;
  if (handshake_remaining_ > 0) {
    SendControlProbe();
  } else {
    AfterHandshake();
  }
}

void SenderEndpoint::AfterHandshake() {
  current_.handshake_done = events_.now();
  phase_ = ConnectionPhase::kResuming;
  SendControlProbe();  // path validation round trip
}

void SenderEndpoint::SendControlProbe() {
  Packet p;
  p.cls = TrafficClass::kC2;
  p.tx_time = events_.now();
  p.size_bytes = config_.control_frame_bytes;
  TransportFrame frame{Channel::kControl, p, next_pn_++, 0};
  probe_pn_ = frame.packet_number;
  ++stats_.control_frames;
  link_.Send(frame);
  events_.Cancel(probe_timer_);
  probe_timer_ = events_.ScheduleIn(Rto(), ComponentId::kTransport, EventKind::kTimer, [this] {
    probe_timer_ = EventQueue::Ticket();
    if (phase_ == ConnectionPhase::kHandshaking || phase_ == ConnectionPhase::kResuming) {
      SendControlProbe();
    }
  });
}

void SenderEndpoint::OnControlEcho(std::uint64_t pn) {
  if (!probe_pn_ || pn != *probe_pn_) return;
  probe_pn_.reset();
  events_.Cancel(probe_timer_);
  if (phase_ == ConnectionPhase::kHandshaking) {
    if (--handshake_remaining_ > 0) {
      SendControlProbe();
    } else {
      AfterHandshake();
    }
  } else if (phase_ == ConnectionPhase::kResuming) {
    phase_ = ConnectionPhase::kEstablished;
    first_resumed_pn_ = next_pn_;
    TrySend();
  }
}

// ---------------------------------------------------------------------------

ReceiverEndpoint::ReceiverEndpoint(EventQueue& events, MetricsCollector& metrics,
                                   TransportConfig config)
    : events_(events),
      metrics_(metrics),
      config_(config),
      guard_(config.freshness_horizon) {}

void ReceiverEndpoint::OnFrame(const TransportFrame& frame) {
  if (feedback_) feedback_(AckFrame{frame.packet_number, frame.channel, frame.stream_offset});
  const SimTime now = events_.now();
  switch (frame.channel) {
    case Channel::kControl:
      return;
    case Channel::kReliableStream: {
      if (frame.stream_offset < next_expected_ || reorder_.count(frame.stream_offset)) {
        ++stats_.stream_duplicate_segments;
        return;
      }
      reorder_.emplace(frame.stream_offset, frame.packet);
      while (!reorder_.empty() && reorder_.begin()->first == next_expected_) {
        const Packet p = reorder_.begin()->second;
        reorder_.erase(reorder_.begin());
        ++next_expected_;
        ++stats_.stream_delivered;
        metrics_.RecordRx(p, now);
        DeliverCommand(p);
      }
      return;
    }
    case Channel::kUnreliableDatagram:
      ++stats_.datagrams_received;
      metrics_.RecordRx(frame.packet, now);
      if (frame.packet.cls == TrafficClass::kC2) DeliverCommand(frame.packet);
      return;
  }
}

ReplayGuard::Verdict ReceiverEndpoint::DeliverCommand(const Packet& p) {
  const auto verdict = guard_.Check(p, events_.now());
  switch (verdict) {
    case ReplayGuard::Verdict::kAccept:
      ++stats_.commands_accepted;
      accepted_.push_back(p.seq);
      if (sink_) sink_(p);
      break;
    case ReplayGuard::Verdict::kDiscardDuplicate:
      ++stats_.replay_duplicates;
      break;
    case ReplayGuard::Verdict::kDiscardStale:
      ++stats_.replay_stale;
      break;
  }
  return verdict;
}

}  // namespace aquila
