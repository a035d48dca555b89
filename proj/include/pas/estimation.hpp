#pragma once

// Front velocity and arrival-time estimates built from neighbor reports.

#include <algorithm>
#include <span>
#include <stdexcept>

#include "pas/core.hpp"

namespace pas {

struct EstimationError : std::invalid_argument {
  enum class Reason { NoCoveredNeighbors, InvalidObservation, NoInformativeNeighbors };
  EstimationError(Reason r, const char* what) : std::invalid_argument(what), reason(r) {}
  Reason reason;
};

// A covered neighbor that detected the stimulus `elapsed` seconds before us.
struct CoveredObservation {
  Vec2 neighbor_pos;
  SimTime elapsed = 0.0;
};

// Velocity reported by a Covered or Alert neighbor. `lead` is the time the
// neighbor itself still expects to wait for the front (zero once covered).
struct NeighborEstimate {
  Vec2 neighbor_pos;
  Vec2 velocity;
  NodeState state = NodeState::Covered;
  SimTime lead = 0.0;
};

/// Mean of the displacement-over-elapsed vectors from each covered neighbor
/// toward `x_pos`. The result points outward from the front.
[[nodiscard]] inline Vec2 actual_velocity(Vec2 x_pos, std::span<const CoveredObservation> observations) {
  if (observations.empty()) {
    throw EstimationError(EstimationError::Reason::NoCoveredNeighbors, "actual_velocity: no covered neighbors");
  }
  Vec2 sum;
  for (const auto& obs : observations) {
    if (!(obs.elapsed > 0.0) || !std::isfinite(obs.elapsed)) {
      throw EstimationError(EstimationError::Reason::InvalidObservation,
                            "actual_velocity: elapsed time must be positive");
    }
    sum += (x_pos - obs.neighbor_pos) / obs.elapsed;
  }
  return sum / static_cast<double>(observations.size());
}

[[nodiscard]] inline Vec2 expected_velocity(std::span<const NeighborEstimate> estimates) {
  if (estimates.empty()) {
    throw EstimationError(EstimationError::Reason::NoInformativeNeighbors,
                          "expected_velocity: no informative neighbors");
  }
  Vec2 sum;
  for (const auto& e : estimates) sum += e.velocity;
  return sum / static_cast<double>(estimates.size());
}

namespace detail {

// Time for the front, moving with `velocity` from `from`, to reach `to`.
// kNever when the neighbor's front is stationary or receding from `to`.
[[nodiscard]] inline SimTime projected_travel(Vec2 from, Vec2 to, Vec2 velocity) {
  const double speed = magnitude(velocity);
  const Vec2 ix = to - from;
  const double dist = magnitude(ix);
  if (!(speed > 0.0)) return kNever;
  if (dist == 0.0) return 0.0;
  const double c = cos_angle(velocity, ix);
  if (!(c > 0.0)) return kNever;
  return dist * c / speed;
}

}  // namespace detail

/// Minimum over neighbors of the distance along each neighbor's reported
/// direction of travel divided by its speed. Returns kNever when no neighbor
/// has the front moving toward `x_pos`.
[[nodiscard]] inline SimTime expected_arrival_time(Vec2 x_pos, std::span<const NeighborEstimate> estimates) {
  if (estimates.empty()) {
    throw EstimationError(EstimationError::Reason::NoInformativeNeighbors,
                          "expected_arrival_time: no informative neighbors");
  }
  SimTime best = kNever;
  for (const auto& e : estimates) {
    best = std::min(best, detail::projected_travel(e.neighbor_pos, x_pos, e.velocity));
  }
  return best;
}

// Same minimum, but each neighbor's term is offset by the lead it reported,
// so a chain of Alert nodes ahead of the front does not look closer than it is.
// Equal to expected_arrival_time when every lead is zero.
[[nodiscard]] inline SimTime chained_arrival_time(Vec2 x_pos, std::span<const NeighborEstimate> estimates) {
  if (estimates.empty()) {
    throw EstimationError(EstimationError::Reason::NoInformativeNeighbors,
                          "chained_arrival_time: no informative neighbors");
  }
  SimTime best = kNever;
  for (const auto& e : estimates) {
    const SimTime travel = detail::projected_travel(e.neighbor_pos, x_pos, e.velocity);
    if (is_never(travel) || is_never(e.lead)) continue;
    best = std::min(best, std::max(0.0, e.lead) + travel);
  }
  return best;
}

}  // namespace pas
