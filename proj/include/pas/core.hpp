#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace pas {

// Simulated time in seconds. Arrival times use +inf for "never".
using SimTime = double;
using NodeId = std::uint32_t;

inline constexpr SimTime kNever = std::numeric_limits<double>::infinity();

[[nodiscard]] inline bool is_never(SimTime t) noexcept { return std::isinf(t) && t > 0; }

// Safe/Alert/Covered protocol state. Only Safe nodes may sleep.
enum class NodeState : std::uint8_t { Safe = 0, Alert = 1, Covered = 2 };

enum class PowerMode : std::uint8_t { Awake = 0, Asleep = 1 };

[[nodiscard]] constexpr const char* to_string(NodeState s) noexcept {
  switch (s) {
    case NodeState::Safe: return "Safe";
    case NodeState::Alert: return "Alert";
    case NodeState::Covered: return "Covered";
  }
  return "?";
}

[[nodiscard]] constexpr const char* to_string(PowerMode m) noexcept {
  return m == PowerMode::Awake ? "Awake" : "Asleep";
}

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Planar vector in meters (positions) or m/s (velocities).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double k, Vec2 v) noexcept { return {k * v.x, k * v.y}; }
  friend constexpr Vec2 operator*(Vec2 v, double k) noexcept { return k * v; }
  friend constexpr Vec2 operator/(Vec2 v, double k) noexcept { return {v.x / k, v.y / k}; }
  Vec2& operator+=(Vec2 o) noexcept {
    x += o.x;
    y += o.y;
    return *this;
  }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

[[nodiscard]] inline bool is_finite(Vec2 v) noexcept { return std::isfinite(v.x) && std::isfinite(v.y); }

[[nodiscard]] constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }

[[nodiscard]] inline double magnitude(Vec2 v) noexcept { return std::hypot(v.x, v.y); }

[[nodiscard]] inline double distance(Vec2 a, Vec2 b) noexcept { return magnitude(a - b); }

// Cosine of the included angle between two non-zero vectors.
[[nodiscard]] inline double cos_angle(Vec2 a, Vec2 b) {
  const double ma = magnitude(a);
  const double mb = magnitude(b);
  if (!(ma > 0.0) || !(mb > 0.0)) {
    throw DomainError("cos_angle: zero-magnitude vector");
  }
  const double c = dot(a, b) / (ma * mb);
  return c < -1.0 ? -1.0 : (c > 1.0 ? 1.0 : c);
}

[[nodiscard]] inline Vec2 rotated(Vec2 v, double radians) noexcept {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

}  // namespace pas
