#pragma once

// Detection-delay and energy metrics over a finished run, plus CSV output.

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "pas/simkernel.hpp"

namespace pas {

struct NoEventsError : std::runtime_error {
  NoEventsError() : std::runtime_error("no node was reached by the stimulus within the horizon") {}
};

[[nodiscard]] inline bool reached(const NodeResult& n, double horizon) noexcept { return n.first_arrival < horizon; }

// Delay for a reached node; an undetected one is charged up to the horizon.
[[nodiscard]] inline std::optional<double> detection_delay(const NodeResult& n, double horizon) {
  if (!reached(n, horizon)) return std::nullopt;
  const SimTime seen = n.detection_time.value_or(horizon);
  return seen - n.first_arrival;
}

[[nodiscard]] inline double avg_detection_delay(const RunResult& r) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& n : r.nodes) {
    if (auto d = detection_delay(n, r.horizon)) {
      sum += *d;
      ++count;
    }
  }
  if (count == 0) throw NoEventsError();
  return sum / static_cast<double>(count);
}

[[nodiscard]] inline double avg_energy(const RunResult& r) {
  if (r.nodes.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& n : r.nodes) sum += n.ledger.total();
  return sum / static_cast<double>(r.nodes.size());
}

[[nodiscard]] inline double total_state_seconds(const RunResult& r, NodeState s) {
  double sum = 0.0;
  for (const auto& n : r.nodes) sum += n.state_seconds[static_cast<int>(s)];
  return sum;
}

// Reached nodes still undetected at the horizon.
[[nodiscard]] inline std::size_t undetected_count(const RunResult& r) {
  std::size_t k = 0;
  for (const auto& n : r.nodes) k += reached(n, r.horizon) && !n.detection_time;
  return k;
}

inline constexpr const char* kNodesCsvHeader =
    "node_id,x,y,first_arrival_s,detection_s,delay_s,awake_j,sleep_j,tx_j,rx_j,total_j,msgs_tx,msgs_rx";
inline constexpr const char* kSummaryCsvHeader =
    "scenario,strategy,alert_threshold_s,max_sleep_s,avg_delay_s,avg_energy_j";

namespace csv {

[[nodiscard]] inline std::string num(double v) { return sim::format_double(v); }

[[nodiscard]] inline std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

}  // namespace csv

// Empty cells: first_arrival_s when never reached, detection_s when not
// detected, delay_s when not reached before the horizon.
inline void write_nodes_csv(std::ostream& os, const RunResult& r) {
  os << kNodesCsvHeader << '\n';
  for (const auto& n : r.nodes) {
    const auto& l = n.ledger;
    os << n.id << ',' << csv::num(n.pos.x) << ',' << csv::num(n.pos.y) << ','
       << (is_never(n.first_arrival) ? std::string() : csv::num(n.first_arrival)) << ','
       << csv::opt(n.detection_time) << ',' << csv::opt(detection_delay(n, r.horizon)) << ','
       << csv::num(l.awake_j) << ',' << csv::num(l.sleep_j) << ',' << csv::num(l.tx_j) << ','
       << csv::num(l.rx_j) << ',' << csv::num(l.total()) << ',' << n.msgs_tx << ',' << n.msgs_rx << '\n';
  }
}

struct SummaryRow {
  std::string scenario;
  std::string strategy;
  double alert_threshold = 0.0;
  double max_sleep = 0.0;
  std::optional<double> avg_delay;
  double avg_energy = 0.0;
};

[[nodiscard]] inline SummaryRow summarize(const RunResult& r) {
  SummaryRow row{r.scenario, r.strategy, r.alert_threshold, r.max_sleep, std::nullopt, avg_energy(r)};
  try {
    row.avg_delay = avg_detection_delay(r);
  } catch (const NoEventsError&) {
  }
  return row;
}

inline void write_summary_row(std::ostream& os, const SummaryRow& row) {
  os << row.scenario << ',' << row.strategy << ',' << csv::num(row.alert_threshold) << ','
     << csv::num(row.max_sleep) << ',' << csv::opt(row.avg_delay) << ',' << csv::num(row.avg_energy) << '\n';
}

}  // namespace pas
