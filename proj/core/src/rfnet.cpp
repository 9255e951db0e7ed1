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

#include "cargoswarm/rfnet.hpp"

#include <fstream>

#include "cargoswarm/error.hpp"

namespace cargoswarm {

namespace {

constexpr std::array<std::uint16_t, 256> make_crc_table() {
  std::array<std::uint16_t, 256> table{};
  for (unsigned i = 0; i < 256; ++i) {
    std::uint16_t crc = static_cast<std::uint16_t>(i << 8);
    for (int b = 0; b < 8; ++b) {
      crc = static_cast<std::uint16_t>((crc & 0x8000) ? (crc << 1) ^ 0x1021 : crc << 1);
    }
    table[i] = crc;
  }
  return table;
}

constexpr auto kCrcTable = make_crc_table();

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

std::uint16_t narrow_u16(int v, const char* field) {
  if (v < 0 || v > 0xFFFF) {
    throw Error(ErrorCode::kPayloadTooLarge, std::string(field) + " " + std::to_string(v) + " does not fit 16 bits");
  }
  return static_cast<std::uint16_t>(v);
}

std::size_t expected_payload(MessageKind kind) {
  switch (kind) {
    case MessageKind::kAssignDestination: return 4;
    case MessageKind::kTelemetry: return 8;
    case MessageKind::kActivate:
    case MessageKind::kAck: return 0;
  }
  return 0;
}

}  // namespace

Channel Channel::of(int index) {
  if (index < 0 || index >= kChannelCount) {
    throw Error(ErrorCode::kInvalidArgument, "channel " + std::to_string(index) + " outside [0, 128)");
  }
  return Channel{index};
}

Channel assign_channel(VehicleId vehicle) {
  if (vehicle < 0) throw Error(ErrorCode::kInvalidArgument, "negative vehicle id");
  if (vehicle >= kChannelCount) {
    throw Error(ErrorCode::kVehicleLimitExceeded,
                "vehicle " + std::to_string(vehicle) + " exceeds the " + std::to_string(kChannelCount) + " channels");
  }
  return Channel{vehicle};
}

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::kActivate: return "ACTIVATE";
    case MessageKind::kAssignDestination: return "ASSIGN_DESTINATION";
    case MessageKind::kTelemetry: return "TELEMETRY";
    case MessageKind::kAck: return "ACK";
  }
  return "UNKNOWN";
}

std::uint16_t crc16_ccitt_false(std::span<const std::uint8_t> data) {
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t byte : data) {
    crc = static_cast<std::uint16_t>((crc << 8) ^ kCrcTable[((crc >> 8) ^ byte) & 0xFF]);
  }
  return crc;
}

WireFrame frame_payload(std::uint8_t kind, std::uint8_t vehicle, std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxPayload) {
    throw Error(ErrorCode::kPayloadTooLarge,
                std::to_string(payload.size()) + " byte payload exceeds " + std::to_string(kMaxPayload));
  }
  WireFrame f;
  f.bytes.reserve(kFrameHeaderSize + payload.size() + kFrameCrcSize);
  f.bytes = {kFrameSync, kFrameVersion, kind, vehicle, static_cast<std::uint8_t>(payload.size())};
  f.bytes.insert(f.bytes.end(), payload.begin(), payload.end());
  const auto crc = crc16_ccitt_false(std::span(f.bytes).subspan(1));
  put_u16(f.bytes, crc);
  return f;
}

WireFrame encode(const Message& m) {
  if (m.vehicle_id < 0 || m.vehicle_id > 0xFF) {
    throw Error(ErrorCode::kPayloadTooLarge, "vehicle id " + std::to_string(m.vehicle_id) + " does not fit 8 bits");
  }
  std::vector<std::uint8_t> payload;
  switch (m.kind) {
    case MessageKind::kAssignDestination: {
      const NodeId& d = m.destination();
      put_u16(payload, narrow_u16(d.ix, "destination ix"));
      put_u16(payload, narrow_u16(d.iy, "destination iy"));
      break;
    }
    case MessageKind::kTelemetry: {
      const TelemetryPayload& t = m.telemetry_payload();
      put_u16(payload, t.x_mm);
      put_u16(payload, t.y_mm);
      put_u16(payload, t.speed_mm_s);
      put_u16(payload, t.heading_cdeg);
      break;
    }
    case MessageKind::kActivate:
    case MessageKind::kAck:
      break;
  }
  return frame_payload(static_cast<std::uint8_t>(m.kind), static_cast<std::uint8_t>(m.vehicle_id), payload);
}

Message decode(std::span<const std::uint8_t> b) {
  if (b.empty() || b[0] != kFrameSync) throw Error(ErrorCode::kBadSync, "missing 0x7E sync byte");
  if (b.size() < 2 || b[1] != kFrameVersion) throw Error(ErrorCode::kBadVersion, "unsupported frame version");
  if (b.size() < kFrameHeaderSize + kFrameCrcSize) throw Error(ErrorCode::kBadLength, "frame shorter than header");
  const std::size_t len = b[4];
  if (len > kMaxPayload || b.size() != kFrameHeaderSize + len + kFrameCrcSize) {
    throw Error(ErrorCode::kBadLength, "length byte " + std::to_string(len) + " disagrees with frame size " +
                                           std::to_string(b.size()));
  }
  const auto body = b.subspan(1, kFrameHeaderSize - 1 + len);
  if (crc16_ccitt_false(body) != get_u16(b, kFrameHeaderSize + len)) {
    throw Error(ErrorCode::kCrcMismatch, "checksum mismatch");
  }
  const std::uint8_t raw_kind = b[2];
  if (raw_kind < 0x01 || raw_kind > 0x04) {
    throw Error(ErrorCode::kUnknownKind, "kind byte " + std::to_string(raw_kind));
  }
  const auto kind = static_cast<MessageKind>(raw_kind);
  if (len != expected_payload(kind)) {
    throw Error(ErrorCode::kBadLength, std::string(to_string(kind)) + " with " + std::to_string(len) + " byte payload");
  }

  Message m;
  m.kind = kind;
  m.vehicle_id = b[3];
  const auto p = b.subspan(kFrameHeaderSize, len);
  switch (kind) {
    case MessageKind::kAssignDestination:
      m.payload = NodeId{get_u16(p, 0), get_u16(p, 2)};
      break;
    case MessageKind::kTelemetry:
      m.payload = TelemetryPayload{get_u16(p, 0), get_u16(p, 2), get_u16(p, 4), get_u16(p, 6)};
      break;
    case MessageKind::kActivate:
    case MessageKind::kAck:
      m.payload = std::monostate{};
      break;
  }
  return m;
}

std::vector<CaptureRecord> parse_capture(std::span<const std::uint8_t> b) {
  std::vector<CaptureRecord> out;
  std::size_t at = 0;
  while (at < b.size()) {
    if (b.size() - at < 5 + kFrameHeaderSize) throw Error(ErrorCode::kBadLength, "truncated capture record");
    CaptureRecord r;
    r.tick = (static_cast<std::uint32_t>(b[at]) << 24) | (static_cast<std::uint32_t>(b[at + 1]) << 16) |
             (static_cast<std::uint32_t>(b[at + 2]) << 8) | b[at + 3];
    r.channel = Channel::of(b[at + 4]);
    at += 5;
    const std::size_t frame_size = kFrameHeaderSize + b[at + 4] + kFrameCrcSize;
    if (b.size() - at < frame_size) throw Error(ErrorCode::kBadLength, "truncated capture frame");
    r.frame.bytes.assign(b.begin() + static_cast<std::ptrdiff_t>(at),
                         b.begin() + static_cast<std::ptrdiff_t>(at + frame_size));
    at += frame_size;
    out.push_back(std::move(r));
  }
  return out;
}

Medium::Medium(MediumConfig config) : config_(config), rng_(config.seed) {
  if (!(config.loss_probability >= 0.0 && config.loss_probability <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "loss_probability must be in [0, 1]");
  }
  if (config.latency_ticks < 0) throw Error(ErrorCode::kInvalidArgument, "latency_ticks must be >= 0");
}

void Medium::send(Channel channel, const WireFrame& frame, Tick now) {
  const Channel ch = Channel::of(channel.index);
  ++sent_;
  if (capturing_) {
    const auto t = static_cast<std::uint32_t>(now);
    capture_.insert(capture_.end(), {static_cast<std::uint8_t>(t >> 24), static_cast<std::uint8_t>(t >> 16),
                                     static_cast<std::uint8_t>(t >> 8), static_cast<std::uint8_t>(t),
                                     static_cast<std::uint8_t>(ch.index)});
    capture_.insert(capture_.end(), frame.bytes.begin(), frame.bytes.end());
  }
  // 53 high bits -> uniform double in [0, 1); avoids the implementation-
  // defined std::uniform_real_distribution so replays match across libraries.
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  if (u < config_.loss_probability) {
    ++dropped_;
    return;
  }
  queues_[static_cast<std::size_t>(ch.index)].push_back({now + config_.latency_ticks, frame});
}

std::vector<WireFrame> Medium::poll(const Radio& radio, Tick now) {
  auto& q = queues_[static_cast<std::size_t>(Channel::of(radio.channel().index).index)];
  std::vector<WireFrame> out;
  while (!q.empty() && q.front().due <= now) {
    out.push_back(std::move(q.front().frame));
    q.pop_front();
  }
  return out;
}

std::size_t Medium::pending() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

void Medium::write_capture(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(capture_.data()), static_cast<std::streamsize>(capture_.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

}  // namespace cargoswarm
