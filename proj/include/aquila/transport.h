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

#ifndef AQUILA_TRANSPORT_H_
#define AQUILA_TRANSPORT_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "aquila/congestion.h"
#include "aquila/event_queue.h"
#include "aquila/link_model.h"
#include "aquila/metrics.h"
#include "aquila/packet.h"
#include "aquila/scheduler.h"

namespace aquila {

enum class ResumptionMode : std::uint8_t { kZeroRtt, kFullHandshake, kTcpTlsBaseline };
enum class ConnectionPhase : std::uint8_t { kEstablished, kBlackout, kHandshaking, kResuming };

std::string_view ToString(ResumptionMode mode);
std::string_view ToString(ConnectionPhase phase);

// Round trips of handshake before application data may flow again.
int DefaultHandshakeRtts(ResumptionMode mode);

struct TransportConfig {
  ResumptionMode resumption_mode = ResumptionMode::kZeroRtt;
  std::optional<int> handshake_rtts;  // overrides the mode default
  bool session_ticket = true;
  std::uint32_t max_datagram_size = 1200;
  std::uint32_t link_mtu = 1500;
  std::uint32_t overlay_overhead = 80;
  Duration freshness_horizon = std::chrono::seconds(3);
  Duration rto_floor = std::chrono::milliseconds(25);
  Duration initial_rto = std::chrono::milliseconds(500);
  // Raw-datagram control baseline: C2 rides the datagram channel.
  bool c2_over_datagram = false;
  // When false, C2 gets its own controller and video bypasses cwnd.
  bool unified_congestion = true;
  std::uint32_t control_frame_bytes = 100;
};

// Throws ContractViolation unless max_datagram_size fits the link MTU after
// the overlay overhead.
void ValidateTransportConfig(const TransportConfig& config);

// Per-packet transport feedback from receiver to sender.
struct AckFrame {
  std::uint64_t packet_number = 0;
  Channel channel = Channel::kReliableStream;
  std::uint64_t stream_offset = 0;
};

// Application-layer replay defence: strictly increasing sequence numbers
// plus a freshness bound on the embedded timestamp.
class ReplayGuard {
 public:
  enum class Verdict : std::uint8_t { kAccept, kDiscardDuplicate, kDiscardStale };

  explicit ReplayGuard(Duration freshness_horizon) : horizon_(freshness_horizon) {}

  Verdict Check(const Packet& p, SimTime now);
  std::optional<std::uint64_t> highest_accepted(TrafficClass cls) const {
    return highest_[static_cast<std::size_t>(cls)];
  }
  Duration freshness_horizon() const { return horizon_; }

 private:
  Duration horizon_;
  std::array<std::optional<std::uint64_t>, 2> highest_{};
};

std::string_view ToString(ReplayGuard::Verdict verdict);

// Control blackout window of one handover, measured from the blackout start
// to the first acknowledged application packet sent after recovery.
struct BlackoutReport {
  ResumptionMode mode = ResumptionMode::kZeroRtt;
  bool fell_back = false;
  int handshake_rtts = 0;
  SimTime start{};
  SimTime link_up{};
  SimTime handshake_done{};
  SimTime first_confirmed{};
  std::optional<SimTime> last_good_delivery;
  Duration t_phy{};
  Duration t_handshake{};
  Duration t_confirm{};
  Duration w_cb{};
};

struct SenderStats {
  std::uint64_t stream_segments = 0;
  std::uint64_t stream_retransmissions = 0;
  std::uint64_t datagrams_sent = 0;
  std::uint64_t datagrams_lost = 0;
  std::uint64_t datagrams_rejected = 0;
  std::uint64_t credit_sends = 0;
  std::uint64_t control_frames = 0;
  std::uint64_t late_acks = 0;
};

// UAV-side endpoint: drains the scheduler into the reliable stream and the
// datagram channel under one congestion controller, detects loss by
// timeout, and runs the handover recovery sequence.
class SenderEndpoint {
 public:
  // `c2_controller` is only used when unified_congestion is false.
  SenderEndpoint(EventQueue& events, Link& link, PriorityScheduler& scheduler,
                 ScreamFpvController& controller, TransportConfig config,
                 ScreamFpvController* c2_controller = nullptr);
  SenderEndpoint(const SenderEndpoint&) = delete;
  SenderEndpoint& operator=(const SenderEndpoint&) = delete;

  // Ingests into the scheduler and sends whatever the window allows.
  void Submit(const Packet& p);
  void TrySend();

  // Reliable stream send. Returns false if the connection is not
  // established; the segment is then held and sent after recovery.
  bool StreamSend(const Packet& p);
  // Fire-and-forget. Returns false if the datagram is oversized (rejected
  // before the link) or the connection is down.
  bool DgramSend(const Packet& p);

  // Starts a handover now: the link blacks out for t_phy, then the
  // configured resumption sequence runs.
  void Handover(Duration t_phy);

  void OnAck(const AckFrame& ack);

  ConnectionPhase phase() const { return phase_; }
  Duration Rto() const;
  bool StreamDrained() const;
  std::uint64_t unacked_segments() const { return segments_.size(); }
  std::uint64_t bytes_in_flight() const;
  const SenderStats& stats() const { return stats_; }
  const std::vector<BlackoutReport>& blackout_reports() const { return reports_; }
  const TransportConfig& config() const { return config_; }
  ScreamFpvController& controller_for(TrafficClass cls);

 private:
  struct SentRecord {
    TransportFrame frame;
    SimTime sent_at;
    SimTime deadline;
    ScreamFpvController* controller = nullptr;
  };

  void Transmit(TransportFrame frame, ScreamFpvController* controller);
  void ArmLossTimer();
  void OnLossTimer();
  void DeclareLost(std::uint64_t pn);
  void OnBlackout(bool started, const HandoverWindow& window);
  void SendControlProbe();
  void OnControlEcho(std::uint64_t pn);
  void AfterHandshake();
  bool Admit(const Packet& p);

  EventQueue& events_;
  Link& link_;
  PriorityScheduler& scheduler_;
  ScreamFpvController& controller_;
  ScreamFpvController* c2_controller_;
  TransportConfig config_;
  ConnectionPhase phase_ = ConnectionPhase::kEstablished;

  std::uint64_t next_pn_ = 1;
  std::uint64_t next_offset_ = 0;
  std::map<std::uint64_t, Packet> segments_;  // unacked, by stream offset
  std::set<std::uint64_t> retransmit_;        // offsets awaiting resend
  std::map<std::uint64_t, SentRecord> outstanding_;
  std::set<std::pair<SimTime, std::uint64_t>> deadlines_;
  // Packets declared lost by timeout whose ACK may still arrive; a late ACK
  // carries a valid delay sample even though the bytes left flight already.
  std::map<std::uint64_t, SentRecord> presumed_lost_;
  EventQueue::Ticket loss_timer_;
  SimTime loss_timer_at_{};

  // Handover progress.
  int handshake_remaining_ = 0;
  std::optional<std::uint64_t> probe_pn_;
  EventQueue::Ticket probe_timer_;
  std::optional<std::uint64_t> first_resumed_pn_;
  std::optional<SimTime> last_ack_at_;
  BlackoutReport current_;
  std::vector<BlackoutReport> reports_;
  SenderStats stats_;
};

struct ReceiverStats {
  std::uint64_t stream_delivered = 0;
  std::uint64_t stream_duplicate_segments = 0;
  std::uint64_t datagrams_received = 0;
  std::uint64_t replay_duplicates = 0;
  std::uint64_t replay_stale = 0;
  std::uint64_t commands_accepted = 0;
};

// Ground-side endpoint: in-order stream reassembly, datagram intake,
// per-frame feedback, and the replay guard in front of the command sink.
class ReceiverEndpoint {
 public:
  ReceiverEndpoint(EventQueue& events, MetricsCollector& metrics, TransportConfig config);

  void set_feedback(std::function<void(const AckFrame&)> fn) { feedback_ = std::move(fn); }
  void set_command_sink(std::function<void(const Packet&)> fn) { sink_ = std::move(fn); }

  void OnFrame(const TransportFrame& frame);
  // Application-layer entry for C2 that bypasses transport state, e.g. a
  // replayed 0-RTT packet re-injected by an attacker.
  ReplayGuard::Verdict DeliverCommand(const Packet& p);

  const ReceiverStats& stats() const { return stats_; }
  const ReplayGuard& replay_guard() const { return guard_; }
  const std::vector<std::uint64_t>& accepted_commands() const { return accepted_; }

 private:
  EventQueue& events_;
  MetricsCollector& metrics_;
  TransportConfig config_;
  ReplayGuard guard_;
  std::uint64_t next_expected_ = 0;
  std::map<std::uint64_t, Packet> reorder_;
  std::function<void(const AckFrame&)> feedback_;
  std::function<void(const Packet&)> sink_;
  std::vector<std::uint64_t> accepted_;
  ReceiverStats stats_;
};

}  // namespace aquila

#endif  // AQUILA_TRANSPORT_H_
