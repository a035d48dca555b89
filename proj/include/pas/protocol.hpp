#pragma once

// Per-node PAS state machine. Every handler is a pure function
// (context, event) -> Step; the simulation kernel owns the contexts and turns
// the requested window/wake timers into events.

#include <algorithm>
#include <optional>
#include <vector>

#include "pas/core.hpp"
#include "pas/estimation.hpp"
#include "pas/message.hpp"

namespace pas {

struct PasParams {
  double alert_threshold = 10.0;  // s; 0 turns every node into a plain linear-backoff sleeper
  double sleep_increment = 1.0;   // s
  double initial_sleep = 1.0;     // s
  double max_sleep = 10.0;        // s
  double detection_timeout = 30.0;
  double rebroadcast_epsilon = 0.10;
  double collection_window = 0.1;  // s a requester listens for RESPONSEs

  void validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!(alert_threshold >= 0.0) || !std::isfinite(alert_threshold)) {
      throw ConfigError("pas: alert_threshold must be >= 0");
    }
    if (!positive(sleep_increment)) throw ConfigError("pas: sleep_increment must be > 0");
    if (!positive(initial_sleep)) throw ConfigError("pas: initial_sleep must be > 0");
    if (!positive(max_sleep)) throw ConfigError("pas: max_sleep must be > 0");
    if (initial_sleep > max_sleep) throw ConfigError("pas: initial_sleep must not exceed max_sleep");
    if (!positive(detection_timeout)) throw ConfigError("pas: detection_timeout must be > 0");
    if (!(rebroadcast_epsilon > 0.0 && rebroadcast_epsilon <= 1.0)) {
      throw ConfigError("pas: rebroadcast_epsilon must be in (0, 1]");
    }
    if (!positive(collection_window)) throw ConfigError("pas: collection_window must be > 0");
  }
};

// What a requester is listening for.
enum class Window : std::uint8_t {
  None,
  Probe,     // Safe node deciding whether to sleep or go Alert
  Velocity,  // freshly Covered node collecting detection times
};

struct HeardResponse {
  NodeId sender = 0;
  Vec2 pos;
  ResponsePayload payload;
};

struct NodeCtx {
  NodeId id = 0;
  Vec2 pos;
  NodeState state = NodeState::Safe;
  PowerMode power = PowerMode::Asleep;
  double sleep_interval = 0.0;
  std::optional<SimTime> detection_time;
  std::optional<Vec2> velocity_estimate;
  std::optional<SimTime> predicted_arrival;  // absolute; kNever allowed
  std::optional<SimTime> last_broadcast_arrival;

  // Latest RESPONSE per neighbor: the current window for Safe/Covered
  // requesters, accumulated for Alert nodes.
  std::vector<HeardResponse> heard;
  Window window = Window::None;
  std::uint32_t window_gen = 0;
  std::uint32_t wake_gen = 0;
};

struct Step {
  explicit Step(NodeCtx c) : ctx(std::move(c)) {}

  NodeCtx ctx;
  std::vector<Message> out;          // broadcast to neighbors, in order
  std::optional<SimTime> window_end;  // fire on_window_end(ctx.window_gen) then
  std::optional<SimTime> wake_at;     // fire on_wake(ctx.wake_gen) then
  bool dropped = false;               // malformed input ignored
};

[[nodiscard]] inline NodeCtx make_node(NodeId id, Vec2 pos, const PasParams& params) {
  NodeCtx ctx;
  ctx.id = id;
  ctx.pos = pos;
  ctx.sleep_interval = params.initial_sleep;
  return ctx;
}

[[nodiscard]] inline double sleep_schedule(double current, const PasParams& params) {
  return std::min(current + params.sleep_increment, params.max_sleep);
}

namespace detail {

inline void remember(NodeCtx& ctx, const Message& msg) {
  auto it = std::find_if(ctx.heard.begin(), ctx.heard.end(),
                         [&](const HeardResponse& h) { return h.sender == msg.sender; });
  HeardResponse h{msg.sender, msg.sender_pos, *msg.payload};
  if (it == ctx.heard.end()) {
    ctx.heard.push_back(h);
  } else {
    *it = h;
  }
}

// Covered/Alert neighbors that reported a usable velocity.
[[nodiscard]] inline std::vector<NeighborEstimate> informative(const NodeCtx& ctx, SimTime now) {
  std::vector<NeighborEstimate> out;
  for (const auto& h : ctx.heard) {
    if (h.payload.state == NodeState::Safe) continue;
    if (!(magnitude(h.payload.velocity) > 0.0) || !is_finite(h.payload.velocity)) continue;
    const SimTime lead = h.payload.state == NodeState::Covered ? 0.0 : h.payload.predicted_arrival - now;
    out.push_back({h.pos, h.payload.velocity, h.payload.state, std::max(0.0, lead)});
  }
  return out;
}

struct Prediction {
  Vec2 velocity;
  SimTime arrival = kNever;  // absolute
};

[[nodiscard]] inline std::optional<Prediction> predict(const NodeCtx& ctx, SimTime now) {
  const auto est = informative(ctx, now);
  if (est.empty()) return std::nullopt;
  const SimTime rel = chained_arrival_time(ctx.pos, est);
  return Prediction{expected_velocity(est), is_never(rel) ? kNever : now + rel};
}

[[nodiscard]] inline Message response_from(const NodeCtx& ctx) {
  ResponsePayload p;
  p.state = ctx.state;
  p.velocity = ctx.velocity_estimate.value_or(Vec2{});
  if (ctx.state == NodeState::Covered) {
    p.predicted_arrival = *ctx.detection_time;
  } else {
    p.predicted_arrival = ctx.predicted_arrival.value_or(kNever);
  }
  return make_response(ctx.id, ctx.pos, p);
}

[[nodiscard]] inline SimTime relative(SimTime absolute, SimTime now) {
  return is_never(absolute) ? kNever : std::max(0.0, absolute - now);
}

// Whether an Alert node's new prediction differs enough from the one it last
// announced to be worth another RESPONSE.
[[nodiscard]] inline bool changed_significantly(std::optional<SimTime> last_abs, SimTime new_abs, SimTime now,
                                                double epsilon) {
  if (!last_abs) return true;
  const bool old_never = is_never(*last_abs);
  const bool new_never = is_never(new_abs);
  if (old_never != new_never) return true;
  if (old_never) return false;
  const SimTime old_rel = *last_abs - now;
  const SimTime new_rel = new_abs - now;
  if (!(old_rel > 0.0)) return false;
  return std::abs(new_rel - old_rel) / old_rel > epsilon;
}

inline void go_to_sleep(Step& step, SimTime now) {
  step.ctx.state = NodeState::Safe;
  step.ctx.power = PowerMode::Asleep;
  step.ctx.window = Window::None;
  ++step.ctx.wake_gen;
  step.wake_at = now + step.ctx.sleep_interval;
}

inline void open_window(Step& step, Window kind, SimTime now, const PasParams& params) {
  step.ctx.heard.clear();
  step.ctx.window = kind;
  ++step.ctx.window_gen;
  step.window_end = now + params.collection_window;
  step.out.push_back(make_request(step.ctx.id, step.ctx.pos));
}

}  // namespace detail

/// Stimulus sensed by an awake node: Safe or Alert becomes Covered and asks
/// its neighbors for their detection times. Already Covered: no-op.
[[nodiscard]] inline Step on_detect(const NodeCtx& ctx, SimTime now, const PasParams& params) {
  Step step(ctx);
  if (ctx.state == NodeState::Covered) return step;
  step.ctx.state = NodeState::Covered;
  step.ctx.power = PowerMode::Awake;
  step.ctx.detection_time = now;
  step.ctx.velocity_estimate.reset();
  step.ctx.predicted_arrival = now;
  detail::open_window(step, Window::Velocity, now, params);
  return step;
}

[[nodiscard]] inline Step on_message(const NodeCtx& ctx, const Message& msg, SimTime now, const PasParams& params) {
  Step step(ctx);
  if (!msg.well_formed()) {
    step.dropped = true;
    return step;
  }
  if (ctx.power == PowerMode::Asleep || msg.sender == ctx.id) return step;

  if (msg.kind == MessageKind::Request) {
    if (ctx.state != NodeState::Safe) step.out.push_back(detail::response_from(ctx));
    return step;
  }

  detail::remember(step.ctx, msg);
  if (ctx.state != NodeState::Alert) return step;

  const auto pred = detail::predict(step.ctx, now);
  const SimTime arrival = pred ? pred->arrival : kNever;
  if (pred) step.ctx.velocity_estimate = pred->velocity;
  step.ctx.predicted_arrival = arrival;

  if (detail::relative(arrival, now) > params.alert_threshold) {
    step.ctx.sleep_interval = params.initial_sleep;
    detail::go_to_sleep(step, now);
    return step;
  }
  if (detail::changed_significantly(ctx.last_broadcast_arrival, arrival, now, params.rebroadcast_epsilon)) {
    step.ctx.last_broadcast_arrival = arrival;
    step.out.push_back(detail::response_from(step.ctx));
  }
  return step;
}

/// Collection window closed. A Covered requester derives its actual velocity
/// from covered neighbors that detected strictly earlier; a Safe requester
/// either goes Alert or backs off and sleeps longer.
[[nodiscard]] inline Step on_window_end(const NodeCtx& ctx, std::uint32_t gen, SimTime now, const PasParams& params) {
  Step step(ctx);
  if (gen != ctx.window_gen || ctx.window == Window::None) return step;
  step.ctx.window = Window::None;

  if (ctx.window == Window::Velocity) {
    std::vector<CoveredObservation> obs;
    for (const auto& h : ctx.heard) {
      if (h.payload.state != NodeState::Covered) continue;
      const SimTime elapsed = *ctx.detection_time - h.payload.predicted_arrival;
      if (elapsed > 0.0 && std::isfinite(elapsed)) obs.push_back({h.pos, elapsed});
    }
    if (!obs.empty()) {
      step.ctx.velocity_estimate = actual_velocity(ctx.pos, obs);
      step.out.push_back(detail::response_from(step.ctx));
    }
    return step;
  }

  if (ctx.state != NodeState::Safe) return step;
  const auto pred = detail::predict(ctx, now);
  if (pred && detail::relative(pred->arrival, now) < params.alert_threshold) {
    step.ctx.state = NodeState::Alert;
    step.ctx.sleep_interval = params.initial_sleep;
    step.ctx.velocity_estimate = pred->velocity;
    step.ctx.predicted_arrival = pred->arrival;
    step.ctx.last_broadcast_arrival = pred->arrival;
    step.out.push_back(detail::response_from(step.ctx));
    return step;
  }
  step.ctx.sleep_interval = sleep_schedule(ctx.sleep_interval, params);
  step.ctx.heard.clear();
  detail::go_to_sleep(step, now);
  return step;
}

/// Sleep timer fired. Stale timers (gen mismatch) are ignored.
[[nodiscard]] inline Step on_wake(const NodeCtx& ctx, std::uint32_t gen, bool covered_now, SimTime now,
                                  const PasParams& params) {
  Step step(ctx);
  if (gen != ctx.wake_gen || ctx.power != PowerMode::Asleep) return step;
  step.ctx.power = PowerMode::Awake;
  if (covered_now) {
    auto detected = on_detect(step.ctx, now, params);
    return detected;
  }
  detail::open_window(step, Window::Probe, now, params);
  return step;
}

inline Step on_wake(const NodeCtx& ctx, bool covered_now, SimTime now, const PasParams& params) {
  return on_wake(ctx, ctx.wake_gen, covered_now, now, params);
}

/// The stimulus left a Covered node and stayed away for the detection
/// timeout: the node is Safe again and restarts its sleep ramp.
[[nodiscard]] inline Step on_stimulus_receded(const NodeCtx& ctx, SimTime now, const PasParams& params) {
  Step step(ctx);
  if (ctx.state != NodeState::Covered) return step;
  step.ctx.sleep_interval = params.initial_sleep;
  step.ctx.detection_time.reset();
  step.ctx.velocity_estimate.reset();
  step.ctx.predicted_arrival.reset();
  step.ctx.last_broadcast_arrival.reset();
  step.ctx.heard.clear();
  detail::go_to_sleep(step, now);
  return step;
}

// Tracks continuous absence of the stimulus at a Covered node; reports when
// the detection timeout has elapsed.
class RecedeTimer {
 public:
  explicit RecedeTimer(double timeout) : timeout_(timeout) {}

  // Coverage sample at `now`. Returns the deadline while the stimulus is absent.
  std::optional<SimTime> observe(bool covered, SimTime now) {
    if (covered) {
      clear_since_.reset();
    } else if (!clear_since_) {
      clear_since_ = now;
    }
    return deadline();
  }

  [[nodiscard]] std::optional<SimTime> deadline() const {
    if (!clear_since_) return std::nullopt;
    return *clear_since_ + timeout_;
  }

  [[nodiscard]] bool expired(SimTime now) const { return clear_since_ && now >= *clear_since_ + timeout_; }

 private:
  double timeout_ = 0.0;
  std::optional<SimTime> clear_since_{};
};

}  // namespace pas
