#pragma once

// Deterministic discrete-event engine. One run owns every node context, the
// event queue and the energy ledgers; events pop in (time, insertion order).

#include <array>
#include <charconv>
#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pas/core.hpp"
#include "pas/energy.hpp"
#include "pas/message.hpp"
#include "pas/protocol.hpp"
#include "pas/stimulus.hpp"

namespace pas {

enum class StrategyKind : std::uint8_t { NS, PAS };

struct Strategy {
  StrategyKind kind = StrategyKind::PAS;
  PasParams pas;

  [[nodiscard]] static Strategy ns() { return {StrategyKind::NS, {}}; }
  [[nodiscard]] static Strategy with_pas(PasParams p) { return {StrategyKind::PAS, p}; }
  // The stimulus-based baseline: PAS that never enters Alert.
  [[nodiscard]] static Strategy sas(PasParams p) {
    p.alert_threshold = 0.0;
    return {StrategyKind::PAS, p};
  }

  [[nodiscard]] std::string label() const {
    if (kind == StrategyKind::NS) return "ns";
    return pas.alert_threshold == 0.0 ? "sas" : "pas";
  }
};

struct Scenario {
  std::string name = "scenario";
  std::vector<Vec2> nodes;  // NodeId is the index
  double radio_range = 10.0;
  StimulusModel stimulus{IsotropicFront{}};
  Strategy strategy;
  PowerProfile power;
  double horizon = 120.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (nodes.empty()) throw ConfigError("scenario: no nodes");
    if (!(radio_range > 0.0) || !std::isfinite(radio_range)) throw ConfigError("scenario: radio_range must be > 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("scenario: horizon must be > 0");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!is_finite(nodes[i])) throw ConfigError("scenario: node position must be finite");
      for (std::size_t j = 0; j < i; ++j) {
        if (nodes[i] == nodes[j]) throw ConfigError("scenario: node positions must be distinct");
      }
    }
    if (strategy.kind == StrategyKind::PAS) strategy.pas.validate();
    power.validate();
  }
};

[[nodiscard]] inline std::vector<NodeId> neighbors(const Scenario& s, NodeId id) {
  std::vector<NodeId> out;
  for (NodeId j = 0; j < s.nodes.size(); ++j) {
    if (j != id && distance(s.nodes[id], s.nodes[j]) <= s.radio_range) out.push_back(j);
  }
  return out;
}

struct NodeResult {
  NodeId id = 0;
  Vec2 pos;
  SimTime first_arrival = kNever;
  std::optional<SimTime> detection_time;
  // Sleep period the node was committed to when the front reached it;
  // zero if it was awake.
  double interval_at_arrival = 0.0;
  EnergyLedger ledger;
  std::array<double, 3> state_seconds{};  // indexed by NodeState
  double asleep_seconds = 0.0;
  std::uint32_t msgs_tx = 0;
  std::uint32_t msgs_rx = 0;
  NodeState final_state = NodeState::Safe;
  double final_sleep_interval = 0.0;
};

struct RunResult {
  std::string scenario;
  std::string strategy;
  double alert_threshold = 0.0;
  double max_sleep = 0.0;
  double horizon = 0.0;
  std::vector<NodeResult> nodes;
  std::map<std::pair<NodeState, NodeState>, std::uint64_t> transitions;
  std::uint64_t events = 0;
  std::uint64_t stimulus_arrivals = 0;
  std::uint64_t dropped_malformed = 0;
  std::string trace;  // filled when tracing
};

struct RunOptions {
  bool trace = false;
};

namespace sim {

struct Horizon {};
struct NodeWake {
  NodeId node;
  std::uint32_t gen;
};
struct Deliver {
  std::size_t message;  // index into the run's message log
  NodeId to;
};
struct StimulusArrives {
  NodeId node;
};
struct CollectionWindowEnd {
  NodeId node;
  std::uint32_t gen;
};
struct RecedeTimeout {
  NodeId node;
};

using EventKind = std::variant<Horizon, NodeWake, Deliver, StimulusArrives, CollectionWindowEnd, RecedeTimeout>;

struct SimEvent {
  SimTime at = 0.0;
  std::uint64_t seq = 0;
  EventKind kind;
};

struct Later {
  bool operator()(const SimEvent& a, const SimEvent& b) const noexcept {
    if (a.at != b.at) return a.at > b.at;
    return a.seq > b.seq;
  }
};

class EventQueue {
 public:
  void schedule(SimTime at, EventKind kind) { queue_.push(SimEvent{at, next_seq_++, std::move(kind)}); }
  [[nodiscard]] bool empty() const noexcept { return queue_.empty(); }
  SimEvent pop() {
    SimEvent e = queue_.top();
    queue_.pop();
    return e;
  }

 private:
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
  std::uint64_t next_seq_ = 0;
};

// Shortest text that parses back to the same double.
[[nodiscard]] inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
[[nodiscard]] inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

[[nodiscard]] inline const char* kind_name(const EventKind& k) {
  constexpr std::array<const char*, 6> names{"Horizon", "NodeWake", "Deliver",
                                             "StimulusArrives", "CollectionWindowEnd", "RecedeTimeout"};
  return names[k.index()];
}

class Kernel {
 public:
  Kernel(const Scenario& s, RunOptions opts) : s_(s), opts_(opts) {
    const auto n = s.nodes.size();
    adjacency_.resize(n);
    for (NodeId i = 0; i < n; ++i) adjacency_[i] = neighbors(s, i);
    result_.scenario = s.name;
    result_.strategy = s.strategy.label();
    result_.alert_threshold = s.strategy.kind == StrategyKind::PAS ? s.strategy.pas.alert_threshold : 0.0;
    result_.max_sleep = s.strategy.kind == StrategyKind::PAS ? s.strategy.pas.max_sleep : 0.0;
    result_.horizon = s.horizon;
    result_.nodes.resize(n);
    ctx_.reserve(n);
    state_since_.assign(n, 0.0);
    power_since_.assign(n, 0.0);
    for (NodeId i = 0; i < n; ++i) {
      auto& r = result_.nodes[i];
      r.id = i;
      r.pos = s.nodes[i];
      r.first_arrival = s.stimulus.first_arrival(s.nodes[i]);
      ctx_.push_back(make_node(i, s.nodes[i], s.strategy.pas));
      if (ns()) ctx_.back().power = PowerMode::Awake;
    }
  }

  RunResult run() {
    queue_.schedule(s_.horizon, Horizon{});
    for (NodeId i = 0; i < ctx_.size(); ++i) {
      if (result_.nodes[i].first_arrival < s_.horizon) {
        queue_.schedule(result_.nodes[i].first_arrival, StimulusArrives{i});
      }
    }
    if (!ns()) {
      std::mt19937_64 rng(s_.seed);
      for (NodeId i = 0; i < ctx_.size(); ++i) {
        queue_.schedule(uniform01(rng) * s_.strategy.pas.initial_sleep, NodeWake{i, ctx_[i].wake_gen});
      }
    }

    while (!queue_.empty()) {
      SimEvent e = queue_.pop();
      now_ = e.at;
      ++result_.events;
      detail_.clear();
      trace_node_ = -1;
      const bool stop = std::holds_alternative<Horizon>(e.kind);
      std::visit([&](const auto& k) { handle(k); }, e.kind);
      if (opts_.trace) write_trace(e);
      if (stop) break;
    }
    return std::move(result_);
  }

 private:
  [[nodiscard]] bool ns() const { return s_.strategy.kind == StrategyKind::NS; }
  [[nodiscard]] const PasParams& params() const { return s_.strategy.pas; }

  void note(const std::string& kv) {
    if (!detail_.empty()) detail_ += ';';
    detail_ += kv;
  }

  void handle(const Horizon&) {
    for (NodeId i = 0; i < ctx_.size(); ++i) {
      auto& r = result_.nodes[i];
      r.state_seconds[static_cast<int>(ctx_[i].state)] += now_ - state_since_[i];
      close_power_interval(i);
      r.final_state = ctx_[i].state;
      r.final_sleep_interval = ctx_[i].sleep_interval;
    }
  }

  void handle(const NodeWake& w) {
    trace_node_ = w.node;
    note("gen=" + std::to_string(w.gen));
    const bool covered = s_.stimulus.covered(ctx_[w.node].pos, now_);
    apply(w.node, on_wake(ctx_[w.node], w.gen, covered, now_, params()));
  }

  void handle(const Deliver& d) {
    trace_node_ = d.to;
    const Message& msg = messages_[d.message];
    note(std::string(msg.kind == MessageKind::Request ? "msg=REQUEST" : "msg=RESPONSE") +
         ";from=" + std::to_string(msg.sender));
    auto& ctx = ctx_[d.to];
    if (ctx.power == PowerMode::Asleep) {
      note("dropped=asleep");
      return;
    }
    const auto bytes = wire_size(msg);
    auto& r = result_.nodes[d.to];
    r.ledger.rx_j += rx_energy(bytes, s_.power);
    ++r.msgs_rx;
    note("rx=" + std::to_string(bytes));
    Step step = on_message(ctx, msg, now_, params());
    if (step.dropped) ++result_.dropped_malformed;
    apply(d.to, std::move(step));
  }

  void handle(const StimulusArrives& a) {
    trace_node_ = a.node;
    ++result_.stimulus_arrivals;
    auto& r = result_.nodes[a.node];
    if (ns()) {
      r.detection_time = now_;
      note("detected");
      return;
    }
    const auto& ctx = ctx_[a.node];
    if (ctx.power == PowerMode::Asleep) {
      r.interval_at_arrival = ctx.sleep_interval;
      note("asleep");
      return;
    }
    apply(a.node, on_detect(ctx, now_, params()));
  }

  void handle(const CollectionWindowEnd& w) {
    trace_node_ = w.node;
    note("gen=" + std::to_string(w.gen));
    apply(w.node, on_window_end(ctx_[w.node], w.gen, now_, params()));
  }

  void handle(const RecedeTimeout& t) {
    trace_node_ = t.node;
    apply(t.node, on_stimulus_receded(ctx_[t.node], now_, params()));
  }

  void close_power_interval(NodeId i) {
    auto& r = result_.nodes[i];
    const double dt = now_ - power_since_[i];
    r.ledger.charge_idle(ctx_[i].power, dt, s_.power);
    if (ctx_[i].power == PowerMode::Asleep) r.asleep_seconds += dt;
    power_since_[i] = now_;
  }

  void apply(NodeId i, Step step) {
    NodeCtx& ctx = ctx_[i];
    auto& r = result_.nodes[i];
    if (step.ctx.state != ctx.state) {
      r.state_seconds[static_cast<int>(ctx.state)] += now_ - state_since_[i];
      state_since_[i] = now_;
      ++result_.transitions[{ctx.state, step.ctx.state}];
      note(std::string("state=") + to_string(step.ctx.state));
    }
    if (step.ctx.power != ctx.power) {
      close_power_interval(i);
      if (step.ctx.power == PowerMode::Awake && s_.power.wakeup_transition_j > 0.0) {
        r.ledger.awake_j += s_.power.wakeup_transition_j;
      }
      note(std::string("power=") + to_string(step.ctx.power));
    }
    if (step.ctx.detection_time && !r.detection_time) {
      r.detection_time = step.ctx.detection_time;
      note("detected");
    }
    ctx = std::move(step.ctx);

    for (auto& msg : step.out) {
      const auto bytes = wire_size(msg);
      r.ledger.tx_j += tx_energy(bytes, s_.power);
      ++r.msgs_tx;
      note("tx=" + std::to_string(bytes));
      const SimTime arrive = now_ + airtime(bytes, s_.power);
      messages_.push_back(std::move(msg));
      for (NodeId to : adjacency_[i]) queue_.schedule(arrive, Deliver{messages_.size() - 1, to});
    }
    if (step.window_end) queue_.schedule(*step.window_end, CollectionWindowEnd{i, ctx.window_gen});
    if (step.wake_at) queue_.schedule(*step.wake_at, NodeWake{i, ctx.wake_gen});
  }

  void write_trace(const SimEvent& e) {
    auto& t = result_.trace;
    t += format_double(e.at);
    t += '\t';
    t += std::to_string(e.seq);
    t += '\t';
    t += kind_name(e.kind);
    t += '\t';
    t += trace_node_ < 0 ? std::string("-") : std::to_string(trace_node_);
    t += '\t';
    t += detail_.empty() ? std::string("-") : detail_;
    t += '\n';
  }

  const Scenario& s_;
  RunOptions opts_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<NodeCtx> ctx_;
  std::vector<SimTime> state_since_;
  std::vector<SimTime> power_since_;
  std::vector<Message> messages_;
  EventQueue queue_;
  RunResult result_;
  SimTime now_ = 0.0;
  std::string detail_;
  long trace_node_ = -1;
};

}  // namespace sim

/// Simulate `scenario` up to its horizon. Throws ConfigError before any event
/// is processed if the scenario is invalid.
[[nodiscard]] inline RunResult run(const Scenario& scenario, RunOptions opts = {}) {
  scenario.validate();
  return sim::Kernel(scenario, opts).run();
}

}  // namespace pas
