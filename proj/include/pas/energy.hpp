#pragma once

// Telos-class power figures and per-node energy accounting.

#include <cstddef>

#include "pas/core.hpp"

namespace pas {

struct PowerProfile {
  double mcu_active_mw = 3.0;
  double sleep_uw = 15.0;
  double receive_mw = 38.0;
  double transmit_mw = 35.0;
  double data_rate_kbps = 250.0;
  double total_active_mw = 41.0;
  double wakeup_transition_j = 0.0;  // charged once per Asleep->Awake switch

  void validate() const {
    for (double v : {mcu_active_mw, sleep_uw, receive_mw, transmit_mw, total_active_mw, wakeup_transition_j}) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("power: figures must be finite and >= 0");
    }
    if (!(data_rate_kbps > 0.0) || !std::isfinite(data_rate_kbps)) {
      throw ConfigError("power: data_rate_kbps must be > 0");
    }
  }
};

[[nodiscard]] inline double airtime(std::size_t bytes, const PowerProfile& profile) {
  return static_cast<double>(8 * bytes) / (profile.data_rate_kbps * 1000.0);
}

namespace detail {
// bits * mW / (kbit/s * 1e6): integer-valued operands, so a single rounding.
[[nodiscard]] inline double frame_energy(std::size_t bytes, double mw, const PowerProfile& profile) {
  return static_cast<double>(8 * bytes) * mw / (profile.data_rate_kbps * 1e6);
}
}  // namespace detail

[[nodiscard]] inline double idle_energy(PowerMode mode, double duration_s, const PowerProfile& profile) {
  if (!(duration_s >= 0.0)) throw DomainError("idle_energy: negative duration");
  // One rounding per product and one per scale: exact for integer durations.
  if (mode == PowerMode::Awake) return profile.total_active_mw * duration_s / 1e3;
  return profile.sleep_uw * duration_s / 1e6;
}

[[nodiscard]] inline double tx_energy(std::size_t bytes, const PowerProfile& profile) {
  if (bytes == 0) throw DomainError("tx_energy: empty frame");
  return detail::frame_energy(bytes, profile.transmit_mw, profile);
}

[[nodiscard]] inline double rx_energy(std::size_t bytes, const PowerProfile& profile) {
  if (bytes == 0) throw DomainError("rx_energy: empty frame");
  return detail::frame_energy(bytes, profile.receive_mw, profile);
}

struct EnergyLedger {
  double awake_j = 0.0;
  double sleep_j = 0.0;
  double tx_j = 0.0;
  double rx_j = 0.0;

  [[nodiscard]] double total() const noexcept { return awake_j + sleep_j + tx_j + rx_j; }

  void charge_idle(PowerMode mode, double duration_s, const PowerProfile& profile) {
    (mode == PowerMode::Awake ? awake_j : sleep_j) += idle_energy(mode, duration_s, profile);
  }
};

}  // namespace pas
