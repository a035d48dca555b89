#pragma once

// Ground-truth diffusion fronts. Both variants grow radially from a single
// source, so coverage is monotone in time and first arrival is closed-form.

#include <cmath>
#include <numbers>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "pas/core.hpp"

namespace pas {

struct IsotropicFront {
  Vec2 source;
  double r0 = 0.0;     // initial radius, m
  double speed = 0.0;  // m/s
};

// Radial speed tabulated at K >= 4 uniformly spaced directions starting at
// angle 0 (the +x axis), linearly interpolated in between.
struct AnisotropicFront {
  Vec2 source;
  double r0 = 0.0;
  std::vector<double> speeds;

  [[nodiscard]] double speed_toward(Vec2 p) const {
    const Vec2 d = p - source;
    double theta = std::atan2(d.y, d.x);
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    const auto k = speeds.size();
    const double pos = theta / (2.0 * std::numbers::pi) * static_cast<double>(k);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    lo %= k;
    const std::size_t hi = (lo + 1) % k;
    return speeds[lo] + frac * (speeds[hi] - speeds[lo]);
  }
};

class StimulusModel {
 public:
  using Variant = std::variant<IsotropicFront, AnisotropicFront>;

  StimulusModel(IsotropicFront f) : front_(f) { validate(); }
  StimulusModel(AnisotropicFront f) : front_(std::move(f)) { validate(); }

  [[nodiscard]] const Variant& front() const noexcept { return front_; }
  [[nodiscard]] bool isotropic() const noexcept { return std::holds_alternative<IsotropicFront>(front_); }

  [[nodiscard]] bool covered(Vec2 p, SimTime t) const {
    const auto [dist, r0, speed] = radial(p);
    return dist <= r0 + speed * t;
  }

  // Earliest time at which p is covered, or kNever.
  [[nodiscard]] SimTime first_arrival(Vec2 p) const {
    const auto [dist, r0, speed] = radial(p);
    if (dist <= r0) return 0.0;
    if (!(speed > 0.0)) return kNever;
    SimTime t = (dist - r0) / speed;
    // Nudge the closed form past rounding so covered(p, first_arrival(p)) holds.
    while (!(dist <= r0 + speed * t)) t = std::nextafter(t, kNever);
    return t;
  }

 private:
  struct Radial {
    double dist;
    double r0;
    double speed;
  };

  [[nodiscard]] Radial radial(Vec2 p) const {
    return std::visit(
        [&](const auto& f) -> Radial {
          const double dist = distance(p, f.source);
          if constexpr (std::is_same_v<std::decay_t<decltype(f)>, IsotropicFront>) {
            return {dist, f.r0, f.speed};
          } else {
            return {dist, f.r0, dist == 0.0 ? 0.0 : f.speed_toward(p)};
          }
        },
        front_);
  }

  void validate() const {
    std::visit(
        [](const auto& f) {
          if (!is_finite(f.source)) throw ConfigError("stimulus: source must be finite");
          if (!(f.r0 >= 0.0) || !std::isfinite(f.r0)) throw ConfigError("stimulus: r0 must be >= 0");
          if constexpr (std::is_same_v<std::decay_t<decltype(f)>, IsotropicFront>) {
            if (!(f.speed >= 0.0) || !std::isfinite(f.speed)) throw ConfigError("stimulus: speed must be >= 0");
          } else {
            if (f.speeds.size() < 4) throw ConfigError("stimulus: anisotropic table needs at least 4 directions");
            for (double v : f.speeds) {
              if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("stimulus: speeds must be >= 0");
            }
          }
        },
        front_);
  }

  Variant front_;
};

}  // namespace pas
