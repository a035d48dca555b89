#pragma once

// Test-only helpers: seeded generators, direct-evaluation oracles that do not
// go through the library's code paths, and a trace-driven energy recomputation.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pas/scenario_file.hpp"
#include "pas/simkernel.hpp"

namespace pas::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  Vec2 point(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }
  // Velocity with speed in (0, max_speed] and random heading.
  Vec2 velocity(double max_speed) {
    const double speed = max_speed * (1.0 - uniform(0.0, 1.0));
    const double heading = uniform(0.0, 2.0 * M_PI);
    return {speed * std::cos(heading), speed * std::sin(heading)};
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Direct evaluations of the three estimation formulas, written against raw
// coordinates and polar angles rather than the library's vector helpers.
namespace oracle {

struct Obs {
  double ix, iy, elapsed;
};

struct Est {
  double ix, iy, vx, vy;
};

inline std::pair<double, double> actual_velocity(double x, double y, const std::vector<Obs>& obs) {
  double sx = 0, sy = 0;
  for (const auto& o : obs) {
    sx += (x - o.ix) / o.elapsed;
    sy += (y - o.iy) / o.elapsed;
  }
  return {sx / static_cast<double>(obs.size()), sy / static_cast<double>(obs.size())};
}

inline std::pair<double, double> expected_velocity(const std::vector<Est>& est) {
  double sx = 0, sy = 0;
  for (const auto& e : est) {
    sx += e.vx;
    sy += e.vy;
  }
  return {sx / static_cast<double>(est.size()), sy / static_cast<double>(est.size())};
}

// Returns +inf when no neighbor term is admissible.
inline double expected_arrival(double x, double y, const std::vector<Est>& est) {
  double best = INFINITY;
  for (const auto& e : est) {
    const double dx = x - e.ix, dy = y - e.iy;
    const double dist = std::sqrt(dx * dx + dy * dy);
    const double speed = std::sqrt(e.vx * e.vx + e.vy * e.vy);
    if (speed == 0.0) continue;
    const double cos_i = std::cos(std::atan2(dy, dx) - std::atan2(e.vy, e.vx));
    if (cos_i <= 0.0) continue;
    best = std::min(best, dist * cos_i / speed);
  }
  return best;
}

}  // namespace oracle

inline bool rel_close(double a, double b, double rel) {
  if (a == b) return true;
  const double scale = std::max({std::abs(a), std::abs(b), 1e-12});
  return std::abs(a - b) / scale <= rel;
}

struct TraceLine {
  double time = 0;
  std::uint64_t seq = 0;
  std::string kind;
  long node = -1;
  std::map<std::string, std::vector<std::string>> detail;
};

inline std::vector<TraceLine> parse_trace(const std::string& text) {
  std::vector<TraceLine> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream cols(line);
    std::string t, seq, kind, node, detail;
    std::getline(cols, t, '\t');
    std::getline(cols, seq, '\t');
    std::getline(cols, kind, '\t');
    std::getline(cols, node, '\t');
    std::getline(cols, detail, '\t');
    TraceLine tl;
    tl.time = std::stod(t);
    tl.seq = std::stoull(seq);
    tl.kind = kind;
    tl.node = node == "-" ? -1 : std::stol(node);
    std::istringstream kvs(detail);
    std::string kv;
    while (std::getline(kvs, kv, ';')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        tl.detail[kv].push_back("");
      } else {
        tl.detail[kv.substr(0, eq)].push_back(kv.substr(eq + 1));
      }
    }
    out.push_back(std::move(tl));
  }
  return out;
}

struct RecomputedEnergy {
  double awake_j = 0, sleep_j = 0, tx_j = 0, rx_j = 0;
  double total() const { return awake_j + sleep_j + tx_j + rx_j; }
};

// Rebuilds every node's ledger from the event trace alone: power-mode changes
// bound the idle intervals, tx=/rx= entries give the frame sizes.
inline std::vector<RecomputedEnergy> recompute_energy(const Scenario& s, const std::string& trace) {
  const auto n = s.nodes.size();
  const bool ns = s.strategy.kind == StrategyKind::NS;
  std::vector<RecomputedEnergy> e(n);
  std::vector<bool> awake(n, ns);
  std::vector<double> since(n, 0.0);
  const auto& p = s.power;
  auto idle = [&](std::size_t i, double now) {
    const double dt = now - since[i];
    if (awake[i]) {
      e[i].awake_j += p.total_active_mw * dt / 1e3;
    } else {
      e[i].sleep_j += p.sleep_uw * dt / 1e6;
    }
    since[i] = now;
  };
  auto frame_j = [&](const std::string& bytes, double mw) {
    return static_cast<double>(8 * std::stoul(bytes)) * mw / (p.data_rate_kbps * 1e6);
  };
  for (const auto& line : parse_trace(trace)) {
    if (line.kind == "Horizon") {
      for (std::size_t i = 0; i < n; ++i) idle(i, line.time);
      break;
    }
    if (line.node < 0) continue;
    const auto i = static_cast<std::size_t>(line.node);
    if (auto it = line.detail.find("rx"); it != line.detail.end()) {
      for (const auto& b : it->second) e[i].rx_j += frame_j(b, p.receive_mw);
    }
    if (auto it = line.detail.find("power"); it != line.detail.end()) {
      idle(i, line.time);
      awake[i] = it->second.back() == "Awake";
      if (awake[i]) e[i].awake_j += p.wakeup_transition_j > 0.0 ? p.wakeup_transition_j : 0.0;
    }
    if (auto it = line.detail.find("tx"); it != line.detail.end()) {
      for (const auto& b : it->second) e[i].tx_j += frame_j(b, p.transmit_mw);
    }
  }
  return e;
}

inline constexpr const char* kReferenceScenario = R"({
  "name": "reference",
  "nodes": {"generator": "uniform", "count": 30, "region": [0, 0, 60, 60]},
  "radio_range": 10,
  "stimulus": {"variant": "isotropic", "source": [0, 0], "r0": 0, "speed": 1},
  "strategy": {"kind": "pas", "alert_threshold": 10, "max_sleep": 10},
  "horizon": 120,
  "seed": 1
})";

inline ScenarioFile reference_file() { return parse_scenario(kReferenceScenario); }

// A small random scenario: 5-40 nodes, random front, random PAS/SAS/NS.
inline Scenario random_scenario(Gen& g) {
  Scenario s;
  s.name = "random";
  const int count = g.integer(5, 40);
  const double side = g.uniform(20.0, 80.0);
  for (int k = 0; k < count; ++k) s.nodes.push_back(g.point(0.0, side));
  s.radio_range = g.uniform(5.0, 20.0);
  const Vec2 src = g.point(0.0, side);
  if (g.coin()) {
    s.stimulus = StimulusModel(IsotropicFront{src, g.uniform(0.0, 5.0), g.uniform(0.2, 3.0)});
  } else {
    AnisotropicFront f{src, g.uniform(0.0, 5.0), {}};
    const int k = g.integer(4, 12);
    for (int i = 0; i < k; ++i) f.speeds.push_back(g.uniform(0.0, 3.0));
    s.stimulus = StimulusModel(std::move(f));
  }
  PasParams p;
  p.alert_threshold = g.uniform(0.0, 30.0);
  p.sleep_increment = g.uniform(0.5, 2.0);
  p.initial_sleep = g.uniform(0.5, 2.0);
  p.max_sleep = p.initial_sleep + g.uniform(0.0, 12.0);
  switch (g.integer(0, 2)) {
    case 0: s.strategy = Strategy::ns(); break;
    case 1: s.strategy = Strategy::sas(p); break;
    default: s.strategy = Strategy::with_pas(p); break;
  }
  s.horizon = g.uniform(30.0, 150.0);
  s.seed = static_cast<std::uint64_t>(g.integer(0, 1 << 30));
  return s;
}

}  // namespace pas::testing
