#include <gtest/gtest.h>

#include "pas/energy.hpp"
#include "pas/message.hpp"

namespace pas {
namespace {

const PowerProfile kTelos{};

TEST(PowerProfile, DefaultsAreTelosFigures) {
  EXPECT_EQ(kTelos.mcu_active_mw, 3.0);
  EXPECT_EQ(kTelos.sleep_uw, 15.0);
  EXPECT_EQ(kTelos.receive_mw, 38.0);
  EXPECT_EQ(kTelos.transmit_mw, 35.0);
  EXPECT_EQ(kTelos.data_rate_kbps, 250.0);
  EXPECT_EQ(kTelos.total_active_mw, 41.0);
  EXPECT_EQ(kTelos.mcu_active_mw + kTelos.receive_mw, kTelos.total_active_mw);
}

TEST(IdleEnergy, Examples) {
  EXPECT_EQ(idle_energy(PowerMode::Awake, 1.0, kTelos), 0.041);
  EXPECT_EQ(idle_energy(PowerMode::Asleep, 1.0, kTelos), 1.5e-5);
  EXPECT_EQ(idle_energy(PowerMode::Awake, 0.0, kTelos), 0.0);
  EXPECT_THROW((void)idle_energy(PowerMode::Awake, -1.0, kTelos), DomainError);
}

TEST(TxEnergy, Examples) {
  EXPECT_DOUBLE_EQ(airtime(kResponseBytes, kTelos), 0.832e-3);
  EXPECT_EQ(tx_energy(kResponseBytes, kTelos), 2.912e-5);
  EXPECT_DOUBLE_EQ(airtime(kRequestBytes, kTelos), 0.416e-3);
  EXPECT_EQ(tx_energy(kRequestBytes, kTelos), 1.456e-5);
  EXPECT_EQ(tx_energy(31250, kTelos), 0.035);
  EXPECT_THROW((void)tx_energy(0, kTelos), DomainError);
}

TEST(RxEnergy, Examples) {
  EXPECT_EQ(rx_energy(kResponseBytes, kTelos), 3.1616e-5);
  EXPECT_EQ(rx_energy(kRequestBytes, kTelos), 1.5808e-5);
  EXPECT_EQ(rx_energy(31250, kTelos), 0.038);
  EXPECT_THROW((void)rx_energy(0, kTelos), DomainError);
}

TEST(EnergyLedger, TotalIsSumOfAccumulators) {
  EnergyLedger l;
  l.charge_idle(PowerMode::Awake, 2.0, kTelos);
  l.charge_idle(PowerMode::Asleep, 10.0, kTelos);
  l.tx_j += tx_energy(13, kTelos);
  l.rx_j += rx_energy(26, kTelos);
  EXPECT_EQ(l.total(), l.awake_j + l.sleep_j + l.tx_j + l.rx_j);
  EXPECT_DOUBLE_EQ(l.awake_j, 0.082);
  EXPECT_DOUBLE_EQ(l.sleep_j, 1.5e-4);
}

TEST(PowerProfile, ValidateRejectsNonsense) {
  PowerProfile p;
  p.data_rate_kbps = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.sleep_uw = -1;
  EXPECT_THROW(p.validate(), ConfigError);
}

}  // namespace
}  // namespace pas
