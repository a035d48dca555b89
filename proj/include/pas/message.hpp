#pragma once

// REQUEST/RESPONSE messages and their little-endian wire encoding:
//
//   offset  size  field
//   0       1     kind (0 = REQUEST, 1 = RESPONSE)
//   1       4     sender id, u32
//   5       8     sender position, 2 x f32 (x, y)
//   -- RESPONSE only --
//   13      1     state (0 Safe, 1 Alert, 2 Covered)
//   14      8     velocity, 2 x f32
//   22      4     predicted arrival, f32 absolute sim time (+inf = never)

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pas/core.hpp"

namespace pas {

enum class MessageKind : std::uint8_t { Request = 0, Response = 1 };

struct ResponsePayload {
  NodeState state = NodeState::Covered;
  Vec2 velocity;
  // Absolute time the sender observed (Covered) or expects (Alert) the front.
  SimTime predicted_arrival = kNever;
};

struct Message {
  MessageKind kind = MessageKind::Request;
  NodeId sender = 0;
  Vec2 sender_pos;
  std::optional<ResponsePayload> payload;

  [[nodiscard]] bool well_formed() const noexcept {
    return kind == MessageKind::Request ? !payload.has_value() : payload.has_value();
  }
};

inline constexpr std::size_t kRequestBytes = 13;
inline constexpr std::size_t kResponseBytes = 26;

[[nodiscard]] inline Message make_request(NodeId sender, Vec2 pos) {
  return {MessageKind::Request, sender, pos, std::nullopt};
}

[[nodiscard]] inline Message make_response(NodeId sender, Vec2 pos, ResponsePayload payload) {
  return {MessageKind::Response, sender, pos, payload};
}

[[nodiscard]] inline std::size_t wire_size(const Message& m) noexcept {
  return m.kind == MessageKind::Request ? kRequestBytes : kResponseBytes;
}

struct MalformedMessage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace wire {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f32(std::vector<std::uint8_t>& out, double v) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

[[nodiscard]] inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

[[nodiscard]] inline double get_f32(std::span<const std::uint8_t> in, std::size_t at) {
  return static_cast<double>(std::bit_cast<float>(get_u32(in, at)));
}

}  // namespace wire

[[nodiscard]] inline std::vector<std::uint8_t> encode(const Message& m) {
  if (!m.well_formed()) throw MalformedMessage("encode: payload presence does not match kind");
  std::vector<std::uint8_t> out;
  out.reserve(wire_size(m));
  out.push_back(static_cast<std::uint8_t>(m.kind));
  wire::put_u32(out, m.sender);
  wire::put_f32(out, m.sender_pos.x);
  wire::put_f32(out, m.sender_pos.y);
  if (m.payload) {
    out.push_back(static_cast<std::uint8_t>(m.payload->state));
    wire::put_f32(out, m.payload->velocity.x);
    wire::put_f32(out, m.payload->velocity.y);
    wire::put_f32(out, m.payload->predicted_arrival);
  }
  return out;
}

[[nodiscard]] inline Message decode(std::span<const std::uint8_t> in) {
  if (in.empty()) throw MalformedMessage("decode: empty frame");
  const auto kind = in[0];
  if (kind > 1) throw MalformedMessage("decode: unknown message kind");
  const bool response = kind == 1;
  if (in.size() != (response ? kResponseBytes : kRequestBytes)) {
    throw MalformedMessage("decode: frame length does not match kind");
  }
  Message m;
  m.kind = static_cast<MessageKind>(kind);
  m.sender = wire::get_u32(in, 1);
  m.sender_pos = {wire::get_f32(in, 5), wire::get_f32(in, 9)};
  if (response) {
    if (in[13] > 2) throw MalformedMessage("decode: unknown node state");
    ResponsePayload p;
    p.state = static_cast<NodeState>(in[13]);
    p.velocity = {wire::get_f32(in, 14), wire::get_f32(in, 18)};
    p.predicted_arrival = wire::get_f32(in, 22);
    m.payload = p;
  }
  return m;
}

}  // namespace pas
