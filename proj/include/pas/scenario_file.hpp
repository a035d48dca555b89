#pragma once

// JSON scenario documents. Sections: name, nodes, radio_range, stimulus,
// strategy, power, horizon, seed, sweep, trace.
//
//   {
//     "name": "reference",
//     "nodes": {"generator": "uniform", "count": 30, "region": [0, 0, 60, 60]},
//     "radio_range": 10,
//     "stimulus": {"variant": "isotropic", "source": [0, 0], "r0": 0, "speed": 1},
//     "strategy": {"kind": "pas", "alert_threshold": 10, "max_sleep": 10},
//     "horizon": 120,
//     "seed": 1
//   }
//
// "nodes" may instead hold {"explicit": [[x, y], ...]} or a "grid" generator.
// A generator without its own "seed" follows the run seed, so replications
// also vary the deployment.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pas/simkernel.hpp"

namespace pas {

struct ScenarioParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NodeGenerator {
  enum class Kind { Explicit, Grid, Uniform } kind = Kind::Explicit;
  std::vector<Vec2> points;
  std::size_t count = 0;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  std::optional<std::uint64_t> seed;

  [[nodiscard]] std::vector<Vec2> generate(std::uint64_t run_seed) const {
    switch (kind) {
      case Kind::Explicit:
        return points;
      case Kind::Grid: {
        const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
        const auto rows = (count + cols - 1) / cols;
        const double dx = (x1 - x0) / static_cast<double>(cols);
        const double dy = (y1 - y0) / static_cast<double>(rows);
        std::vector<Vec2> out;
        for (std::size_t k = 0; k < count; ++k) {
          const auto c = k % cols;
          const auto r = k / cols;
          out.push_back({x0 + dx * (static_cast<double>(c) + 0.5), y0 + dy * (static_cast<double>(r) + 0.5)});
        }
        return out;
      }
      case Kind::Uniform: {
        // Separate stream from the wake-phase generator, which uses run_seed directly.
        std::mt19937_64 rng(seed.value_or(run_seed) ^ 0x9E3779B97F4A7C15ull);
        std::vector<Vec2> out;
        for (std::size_t k = 0; k < count; ++k) {
          const double u = sim::uniform01(rng);
          const double v = sim::uniform01(rng);
          out.push_back({x0 + u * (x1 - x0), y0 + v * (y1 - y0)});
        }
        return out;
      }
    }
    return {};
  }
};

struct SweepSpec {
  std::string param;
  std::vector<double> values;
  std::size_t reps = 5;
};

struct ScenarioFile {
  Scenario base;  // nodes filled per seed from `generator`
  NodeGenerator generator;
  std::optional<SweepSpec> sweep;
  bool trace = false;

  [[nodiscard]] Scenario build(std::uint64_t seed) const {
    Scenario s = base;
    s.seed = seed;
    s.nodes = generator.generate(seed);
    return s;
  }

  [[nodiscard]] Scenario build() const { return build(base.seed); }
};

namespace scenario_detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& field, const std::string& why) {
  throw ScenarioParseError("field '" + field + "': " + why);
}

inline const json& need(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) fail(path + key, "missing");
  return obj.at(key);
}

inline double number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

inline double number_or(const json& obj, const std::string& key, double fallback, const std::string& path) {
  return obj.contains(key) ? number(obj.at(key), path + key) : fallback;
}

inline std::uint64_t unsigned_int(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail(field, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline Vec2 point(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) fail(field, "expected [x, y]");
  return {number(v[0], field + "[0]"), number(v[1], field + "[1]")};
}

inline NodeGenerator parse_nodes(const json& j) {
  NodeGenerator g;
  if (!j.is_object()) fail("nodes", "expected an object");
  if (j.contains("explicit")) {
    const auto& pts = j.at("explicit");
    if (!pts.is_array() || pts.empty()) fail("nodes.explicit", "expected a non-empty list of [x, y]");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      g.points.push_back(point(pts[i], "nodes.explicit[" + std::to_string(i) + "]"));
    }
    return g;
  }
  const auto& kind = need(j, "generator", "nodes.");
  if (kind == "grid") {
    g.kind = NodeGenerator::Kind::Grid;
  } else if (kind == "uniform") {
    g.kind = NodeGenerator::Kind::Uniform;
  } else {
    fail("nodes.generator", "expected \"grid\" or \"uniform\"");
  }
  g.count = unsigned_int(need(j, "count", "nodes."), "nodes.count");
  if (g.count == 0) fail("nodes.count", "must be > 0");
  const auto& region = need(j, "region", "nodes.");
  if (!region.is_array() || region.size() != 4) fail("nodes.region", "expected [x0, y0, x1, y1]");
  g.x0 = number(region[0], "nodes.region[0]");
  g.y0 = number(region[1], "nodes.region[1]");
  g.x1 = number(region[2], "nodes.region[2]");
  g.y1 = number(region[3], "nodes.region[3]");
  if (!(g.x1 > g.x0) || !(g.y1 > g.y0)) fail("nodes.region", "must have positive extent");
  if (j.contains("seed")) g.seed = unsigned_int(j.at("seed"), "nodes.seed");
  return g;
}

inline StimulusModel parse_stimulus(const json& j) {
  const auto& variant = need(j, "variant", "stimulus.");
  const Vec2 source = point(need(j, "source", "stimulus."), "stimulus.source");
  const double r0 = number_or(j, "r0", 0.0, "stimulus.");
  try {
    if (variant == "isotropic") {
      return StimulusModel(IsotropicFront{source, r0, number(need(j, "speed", "stimulus."), "stimulus.speed")});
    }
    if (variant == "anisotropic") {
      const auto& table = need(j, "speeds", "stimulus.");
      if (!table.is_array()) fail("stimulus.speeds", "expected a list of numbers");
      AnisotropicFront f{source, r0, {}};
      for (std::size_t i = 0; i < table.size(); ++i) {
        f.speeds.push_back(number(table[i], "stimulus.speeds[" + std::to_string(i) + "]"));
      }
      return StimulusModel(std::move(f));
    }
  } catch (const ConfigError& e) {
    fail("stimulus", e.what());
  }
  fail("stimulus.variant", "expected \"isotropic\" or \"anisotropic\"");
}

inline Strategy parse_strategy(const json& j) {
  std::string kind;
  const json empty = json::object();
  const json* fields = &empty;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else if (j.is_object()) {
    const auto& k = need(j, "kind", "strategy.");
    if (!k.is_string()) fail("strategy.kind", "expected a string");
    kind = k.get<std::string>();
    fields = &j;
  } else {
    fail("strategy", "expected \"ns\", \"pas\", \"sas\" or an object with \"kind\"");
  }
  if (kind == "ns") return Strategy::ns();
  if (kind != "pas" && kind != "sas") fail("strategy.kind", "expected \"ns\", \"pas\" or \"sas\"");
  PasParams p;
  const std::string path = "strategy.";
  p.alert_threshold = number_or(*fields, "alert_threshold", p.alert_threshold, path);
  p.sleep_increment = number_or(*fields, "sleep_increment", p.sleep_increment, path);
  p.initial_sleep = number_or(*fields, "initial_sleep", p.initial_sleep, path);
  p.max_sleep = number_or(*fields, "max_sleep", p.max_sleep, path);
  p.detection_timeout = number_or(*fields, "detection_timeout", p.detection_timeout, path);
  p.rebroadcast_epsilon = number_or(*fields, "rebroadcast_epsilon", p.rebroadcast_epsilon, path);
  p.collection_window = number_or(*fields, "collection_window", p.collection_window, path);
  return kind == "sas" ? Strategy::sas(p) : Strategy::with_pas(p);
}

inline PowerProfile parse_power(const json& j) {
  if (!j.is_object()) fail("power", "expected an object");
  PowerProfile p;
  const std::string path = "power.";
  p.mcu_active_mw = number_or(j, "mcu_active_mw", p.mcu_active_mw, path);
  p.sleep_uw = number_or(j, "sleep_uw", p.sleep_uw, path);
  p.receive_mw = number_or(j, "receive_mw", p.receive_mw, path);
  p.transmit_mw = number_or(j, "transmit_mw", p.transmit_mw, path);
  p.data_rate_kbps = number_or(j, "data_rate_kbps", p.data_rate_kbps, path);
  p.total_active_mw = number_or(j, "total_active_mw", p.total_active_mw, path);
  p.wakeup_transition_j = number_or(j, "wakeup_transition_j", p.wakeup_transition_j, path);
  return p;
}

inline SweepSpec parse_sweep(const json& j) {
  SweepSpec s;
  const auto& param = need(j, "param", "sweep.");
  if (!param.is_string()) fail("sweep.param", "expected a string");
  s.param = param.get<std::string>();
  const auto& values = need(j, "values", "sweep.");
  if (!values.is_array() || values.empty()) fail("sweep.values", "expected a non-empty list");
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.values.push_back(number(values[i], "sweep.values[" + std::to_string(i) + "]"));
  }
  if (j.contains("reps")) s.reps = unsigned_int(j.at("reps"), "sweep.reps");
  return s;
}

}  // namespace scenario_detail

/// Parse a scenario document. Syntax and field errors raise
/// ScenarioParseError naming the line/column or the offending field.
[[nodiscard]] inline ScenarioFile parse_scenario(const std::string& text) {
  using namespace scenario_detail;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioParseError(e.what());
  }
  if (!doc.is_object()) throw ScenarioParseError("scenario: top level must be an object");

  ScenarioFile f;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("name", "expected a string");
    f.base.name = doc["name"].get<std::string>();
  }
  f.generator = parse_nodes(need(doc, "nodes", ""));
  f.base.radio_range = number(need(doc, "radio_range", ""), "radio_range");
  f.base.stimulus = parse_stimulus(need(doc, "stimulus", ""));
  f.base.strategy = parse_strategy(need(doc, "strategy", ""));
  if (doc.contains("power")) f.base.power = parse_power(doc["power"]);
  f.base.horizon = number(need(doc, "horizon", ""), "horizon");
  if (doc.contains("seed")) f.base.seed = unsigned_int(doc["seed"], "seed");
  if (doc.contains("sweep")) f.sweep = parse_sweep(doc["sweep"]);
  if (doc.contains("trace")) {
    if (!doc["trace"].is_boolean()) fail("trace", "expected true or false");
    f.trace = doc["trace"].get<bool>();
  }
  return f;
}

[[nodiscard]] inline ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace pas
