// pas_sim: run a PAS scenario or sweep one parameter over a list of values.
//
//   pas_sim run <scenario> -o <dir> [--trace]
//   pas_sim sweep <scenario> --param <name> --values <list> --reps <n> -o <dir>

#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pas/cli.hpp"

namespace {

// Accepts "2,4,6" as well as space-separated values.
std::vector<double> split_values(const std::vector<std::string>& raw) {
  std::vector<double> out;
  for (const auto& chunk : raw) {
    std::stringstream ss(chunk);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prediction-based adaptive sleeping simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir;
  bool trace = false;
  auto* run = app.add_subcommand("run", "Simulate one scenario");
  run->add_option("scenario", scenario, "Scenario file (JSON)")->required();
  run->add_option("-o,--output", out_dir, "Output directory")->required();
  run->add_flag("--trace", trace, "Also write the event trace");

  std::string param;
  std::vector<std::string> raw_values;
  std::size_t reps = 0;
  auto* sweep = app.add_subcommand("sweep", "Sweep max_sleep or alert_threshold");
  sweep->add_option("scenario", scenario, "Scenario file (JSON)")->required();
  sweep->add_option("--param", param, "max_sleep | alert_threshold");
  sweep->add_option("--values", raw_values, "Values, comma or space separated");
  sweep->add_option("--reps", reps, "Replications per value (seeds seed..seed+reps-1)");
  sweep->add_option("-o,--output", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pas::cli::kParseError;
  }

  if (*run) return pas::cli::run_command(scenario, out_dir, trace);

  pas::cli::SweepArgs args;
  if (!param.empty()) args.param = param;
  if (reps > 0) args.reps = reps;
  try {
    args.values = split_values(raw_values);
  } catch (const std::exception&) {
    std::cerr << "error: --values must be numbers\n";
    return pas::cli::kParseError;
  }
  return pas::cli::sweep_command(scenario, args, out_dir);
}
