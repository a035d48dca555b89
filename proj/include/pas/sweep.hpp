#pragma once

// Parameter sweeps: reps x values independent runs, executed in parallel and
// collected in (value, rep) order.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "pas/metrics.hpp"
#include "pas/scenario_file.hpp"

namespace pas {

struct SweepRun {
  double value = 0.0;
  std::size_t rep = 0;
  SummaryRow row;
};

struct SweepResult {
  std::string param;
  std::vector<SweepRun> runs;        // sorted by (value, rep)
  std::vector<SummaryRow> aggregate;  // one per value, mean over reps
};

[[nodiscard]] inline bool is_sweep_param(const std::string& name) {
  return name == "max_sleep" || name == "alert_threshold";
}

inline void check_sweep(const ScenarioFile& file, const SweepSpec& spec) {
  if (!is_sweep_param(spec.param)) {
    throw ScenarioParseError("field 'sweep.param': unknown parameter '" + spec.param +
                             "' (expected max_sleep or alert_threshold)");
  }
  if (spec.values.empty()) throw ScenarioParseError("field 'sweep.values': empty");
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const double v = spec.values[i];
    const bool ok = spec.param == "alert_threshold" ? v >= 0.0 : v > 0.0;
    if (!ok || !std::isfinite(v)) throw ScenarioParseError("field 'sweep.values': values must be positive");
    if (i > 0 && !(v > spec.values[i - 1])) throw ScenarioParseError("field 'sweep.values': values must be sorted");
  }
  if (spec.reps == 0) throw ScenarioParseError("field 'sweep.reps': must be > 0");
  if (file.base.strategy.kind != StrategyKind::PAS) throw ConfigError("sweep: strategy must be pas or sas");
}

[[nodiscard]] inline Scenario sweep_scenario(const ScenarioFile& file, const std::string& param, double value,
                                             std::size_t rep) {
  Scenario s = file.build(file.base.seed + rep);
  if (param == "max_sleep") {
    s.strategy.pas.max_sleep = value;
    s.strategy.pas.initial_sleep = std::min(s.strategy.pas.initial_sleep, value);
  } else {
    s.strategy.pas.alert_threshold = value;
  }
  return s;
}

/// Run every (value, rep) combination. Seeds are base seed + rep, so every
/// value sees the same set of deployments and wake phases.
[[nodiscard]] inline SweepResult run_sweep(const ScenarioFile& file, const SweepSpec& spec, unsigned threads = 0) {
  check_sweep(file, spec);
  const std::size_t total = spec.values.size() * spec.reps;
  std::vector<Scenario> jobs;
  jobs.reserve(total);
  for (double v : spec.values) {
    for (std::size_t rep = 0; rep < spec.reps; ++rep) {
      jobs.push_back(sweep_scenario(file, spec.param, v, rep));
      jobs.back().validate();
    }
  }

  std::vector<SummaryRow> rows(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        rows[i] = summarize(run(jobs[i]));
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult out;
  out.param = spec.param;
  for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
    SummaryRow mean;
    double delay_sum = 0.0;
    std::size_t delay_n = 0;
    double energy_sum = 0.0;
    for (std::size_t rep = 0; rep < spec.reps; ++rep) {
      SummaryRow row = rows[vi * spec.reps + rep];
      if (rep == 0) mean = row;
      if (row.avg_delay) {
        delay_sum += *row.avg_delay;
        ++delay_n;
      }
      energy_sum += row.avg_energy;
      row.scenario += "#rep" + std::to_string(rep);
      out.runs.push_back({spec.values[vi], rep, std::move(row)});
    }
    mean.scenario += "#mean";
    mean.avg_delay = delay_n ? std::optional<double>(delay_sum / static_cast<double>(delay_n)) : std::nullopt;
    mean.avg_energy = energy_sum / static_cast<double>(spec.reps);
    out.aggregate.push_back(std::move(mean));
  }
  return out;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << kSummaryCsvHeader << '\n';
  for (const auto& run : r.runs) write_summary_row(os, run.row);
  for (const auto& row : r.aggregate) write_summary_row(os, row);
}

}  // namespace pas
