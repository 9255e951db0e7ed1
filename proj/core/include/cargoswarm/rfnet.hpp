// Copyright 2026 The Cargoswarm Authors
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

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "cargoswarm/grid.hpp"
#include "cargoswarm/reservation.hpp"

namespace cargoswarm {

inline constexpr int kChannelCount = 128;

struct Channel {
  int index = 0;

  /// Throws kInvalidArgument outside [0, 128).
  static Channel of(int index);
  auto operator<=>(const Channel&) const = default;
};

/// One frequency per vehicle: channel index equals vehicle id.
/// Throws kVehicleLimitExceeded for ids >= 128.
Channel assign_channel(VehicleId vehicle);

// Frame layout, big-endian:
//   0x7E | version | kind | vehicle | length | payload[length] | crc16
// crc16 is CRC-16/CCITT-FALSE over version..payload.
inline constexpr std::uint8_t kFrameSync = 0x7E;
inline constexpr std::uint8_t kFrameVersion = 0x01;
inline constexpr std::size_t kFrameHeaderSize = 5;
inline constexpr std::size_t kFrameCrcSize = 2;
inline constexpr std::size_t kMaxPayload = 26;
inline constexpr std::size_t kMaxFrameSize = kFrameHeaderSize + kMaxPayload + kFrameCrcSize;

enum class MessageKind : std::uint8_t {
  kActivate = 0x01,
  kAssignDestination = 0x02,
  kTelemetry = 0x03,
  kAck = 0x04,
};

std::string_view to_string(MessageKind kind);

struct TelemetryPayload {
  std::uint16_t x_mm = 0;
  std::uint16_t y_mm = 0;
  std::uint16_t speed_mm_s = 0;
  std::uint16_t heading_cdeg = 0;

  bool operator==(const TelemetryPayload&) const = default;
};

struct Message {
  MessageKind kind = MessageKind::kAck;
  int vehicle_id = 0;
  std::variant<std::monostate, NodeId, TelemetryPayload> payload;

  static Message activate(int vehicle) { return {MessageKind::kActivate, vehicle, std::monostate{}}; }
  static Message assign_destination(int vehicle, NodeId dest) {
    return {MessageKind::kAssignDestination, vehicle, dest};
  }
  static Message telemetry(int vehicle, TelemetryPayload t) { return {MessageKind::kTelemetry, vehicle, t}; }
  static Message ack(int vehicle) { return {MessageKind::kAck, vehicle, std::monostate{}}; }

  const NodeId& destination() const { return std::get<NodeId>(payload); }
  const TelemetryPayload& telemetry_payload() const { return std::get<TelemetryPayload>(payload); }

  bool operator==(const Message&) const = default;
};

struct WireFrame {
  std::vector<std::uint8_t> bytes;

  std::size_t size() const { return bytes.size(); }
  bool operator==(const WireFrame&) const = default;
};

std::uint16_t crc16_ccitt_false(std::span<const std::uint8_t> data);

/// Frames a raw payload. Throws kPayloadTooLarge past 26 bytes.
WireFrame frame_payload(std::uint8_t kind, std::uint8_t vehicle, std::span<const std::uint8_t> payload);

/// Throws kPayloadTooLarge if a field does not fit its wire width.
WireFrame encode(const Message& message);

/// Validates in order sync, version, length, crc, kind; the first failing
/// check names the error (kBadSync, kBadVersion, kBadLength, kCrcMismatch,
/// kUnknownKind).
Message decode(std::span<const std::uint8_t> bytes);

class Radio {
 public:
  explicit Radio(Channel channel) : channel_(channel) {}

  void tune(Channel channel) { channel_ = channel; }
  Channel channel() const { return channel_; }

 private:
  Channel channel_;
};

struct MediumConfig {
  double loss_probability = 0.0;
  Tick latency_ticks = 0;
  std::uint64_t seed = 0;
};

/// One captured transmission: (tick u32 BE, channel u8, frame bytes).
struct CaptureRecord {
  std::uint32_t tick = 0;
  Channel channel;
  WireFrame frame;

  bool operator==(const CaptureRecord&) const = default;
};

std::vector<CaptureRecord> parse_capture(std::span<const std::uint8_t> bytes);

/// Shared 128-channel radio medium with seeded loss and fixed latency.
class Medium {
 public:
  explicit Medium(MediumConfig config);

  /// Enqueues for delivery at now + latency, or silently drops it with the
  /// configured probability. Exactly one draw per call.
  void send(Channel channel, const WireFrame& frame, Tick now);
  /// Frames due at or before `now` on the radio's channel, in send order.
  std::vector<WireFrame> poll(const Radio& radio, Tick now);

  void enable_capture() { capturing_ = true; }
  const std::vector<std::uint8_t>& capture() const { return capture_; }
  /// Throws kIoFailure.
  void write_capture(const std::filesystem::path& path) const;

  const MediumConfig& config() const { return config_; }
  std::size_t sent() const { return sent_; }
  std::size_t dropped() const { return dropped_; }
  std::size_t pending() const;

 private:
  struct Pending {
    Tick due;
    WireFrame frame;
  };

  MediumConfig config_;
  std::mt19937_64 rng_;
  std::array<std::deque<Pending>, kChannelCount> queues_;
  bool capturing_ = false;
  std::vector<std::uint8_t> capture_;
  std::size_t sent_ = 0;
  std::size_t dropped_ = 0;
};

}  // namespace cargoswarm
