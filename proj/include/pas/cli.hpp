#pragma once

// `run` and `sweep` command bodies. Exit codes: 0 ok, 2 scenario/argument
// error, 3 configuration or output error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pas/metrics.hpp"
#include "pas/scenario_file.hpp"
#include "pas/sweep.hpp"

namespace pas::cli {

inline constexpr int kOk = 0;
inline constexpr int kParseError = 2;
inline constexpr int kConfigError = 3;

namespace detail {

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::filesystem::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw OutputError("cannot create output directory '" + dir + "'");
  }
  return dir;
}

inline std::ofstream open(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write '" + p.string() + "'");
  return out;
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ScenarioParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kConfigError;
  } catch (const OutputError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace detail

/// Single run: writes nodes.csv, summary.csv and, when tracing, trace.tsv.
inline int run_command(const std::string& scenario_path, const std::string& output_dir, bool trace,
                       std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const ScenarioFile file = load_scenario(scenario_path);
    const Scenario scenario = file.build();
    scenario.validate();
    const auto dir = detail::prepare_dir(output_dir);
    const RunResult result = run(scenario, {.trace = trace || file.trace});

    auto nodes = detail::open(dir / "nodes.csv");
    write_nodes_csv(nodes, result);
    auto summary = detail::open(dir / "summary.csv");
    summary << kSummaryCsvHeader << '\n';
    write_summary_row(summary, summarize(result));
    if (trace || file.trace) {
      auto t = detail::open(dir / "trace.tsv");
      t << result.trace;
    }
    if (const auto missed = undetected_count(result); missed > 0) {
      err << "note: " << missed << " reached node(s) undetected at the horizon; delay charged to horizon\n";
    }
    return kOk;
  });
}

struct SweepArgs {
  std::optional<std::string> param;
  std::vector<double> values;
  std::optional<std::size_t> reps;
};

/// Sweep `param` over `values` with `reps` seeds each. Missing arguments fall
/// back to the scenario's own sweep section.
inline int sweep_command(const std::string& scenario_path, const SweepArgs& args, const std::string& output_dir,
                         std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const ScenarioFile file = load_scenario(scenario_path);
    SweepSpec spec = file.sweep.value_or(SweepSpec{});
    if (args.param) spec.param = *args.param;
    if (!args.values.empty()) spec.values = args.values;
    if (args.reps) spec.reps = *args.reps;
    if (spec.param.empty()) throw ScenarioParseError("sweep: no parameter given (use --param or a sweep section)");
    check_sweep(file, spec);
    const auto dir = detail::prepare_dir(output_dir);
    const SweepResult result = run_sweep(file, spec);
    auto out = detail::open(dir / "summary.csv");
    write_sweep_csv(out, result);
    return kOk;
  });
}

}  // namespace pas::cli
