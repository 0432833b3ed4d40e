// Frame/overhead algebra: derived time constants, packet count vs a
// loop-packing oracle, overhead time, and the effective transmission period.

#include <gtest/gtest.h>

#include <cmath>

#include "irspaoi/frame_timing.hpp"
#include "irspaoi/mobility_mc.hpp"

namespace {

using namespace irspaoi;

// Published per-packet budget (table values); t_p_ovh here is the rounded
// figure that the sample counts alone do not reproduce (they give 4.58 us).
FrameTiming published_timing() {
  FrameTiming t;
  t.t_loc = 15e-3;
  t.t_irs = 105.4e-6;
  t.t_p_ovh = 5.3e-6;
  t.t_data = 260e-6;
  t.t_idle = 20e-6;
  t.t_d = 15.15e-9;
  return t;
}

TEST(FrameTiming, DerivedConstantsFromSampleCounts) {
  ScenarioConfig cfg;
  FrameTiming t = derive_timing(cfg.frame, cfg.panel, cfg.geometry);
  EXPECT_NEAR(t.t_data, 260e-6, 0.02 * 260e-6);
  EXPECT_NEAR(t.t_data, 456768.0 / 1.76e9, 1e-15);
  EXPECT_NEAR(t.t_irs, 105.4e-6, 1e-9);  // calibrated coefficient payload
  EXPECT_NEAR(t.t_loc, 15e-3, 0.15 * 15e-3);
  EXPECT_NEAR(t.t_d, 15.15e-9, 1e-11);
  EXPECT_DOUBLE_EQ(t.t_idle, 20e-6);
  // Sample counts give 4.58 us per-packet overhead, not the published 5.3 us.
  EXPECT_NEAR(t.t_p_ovh, 4.5818e-6, 1e-9);
}

TEST(FrameTiming, PerPacketOverheadOverrideIsExact) {
  ScenarioConfig cfg;
  cfg.frame.t_p_ovh_override = 5.3e-6;
  FrameTiming t = derive_timing(cfg.frame, cfg.panel, cfg.geometry);
  EXPECT_DOUBLE_EQ(t.t_p_ovh, 5.3e-6);
}

TEST(FrameTiming, PacketsAtOneSecond) {
  EXPECT_EQ(packets_per_update(published_timing(), 1.0), 3453);
}

TEST(FrameTiming, PacketsEmptyWindow) {
  FrameTiming t = published_timing();
  EXPECT_EQ(packets_per_update(t, t.t_conf()), 0);
  EXPECT_EQ(packets_per_update(t, 0.5 * t.t_conf()), 0);
  EXPECT_THROW(packets_per_update(t, 0.0), std::invalid_argument);
}

TEST(FrameTiming, PacketsSingleWindow) {
  // Exactly representable values so window == one denominator bit-for-bit.
  FrameTiming t;
  t.t_loc = 0.015625;  // 2^-6
  t.t_irs = 0.0;
  t.t_p_ovh = 0.000244140625;  // 2^-12
  t.t_data = 0.000244140625;   // 2^-12
  t.t_idle = 0.0001220703125;  // 2^-13
  double den = t.t_p_ovh + t.t_data + t.t_idle;
  EXPECT_EQ(packets_per_update(t, t.t_conf() + den), 1);
  EXPECT_EQ(packets_per_update(t, t.t_conf() + 0.5 * den), 1);
  EXPECT_EQ(packets_per_update(t, t.t_conf() + 1.5 * den), 2);
}

TEST(FrameTiming, PacketsMatchLoopPackingOracle) {
  TrialRng rng(2026);
  for (int it = 0; it < 10000; ++it) {
    FrameTiming t;
    t.t_loc = rng.uniform(0.0, 0.02);
    t.t_irs = rng.uniform(0.0, 2e-4);
    t.t_p_ovh = rng.uniform(1e-7, 1e-5);
    t.t_data = rng.uniform(1e-4, 1e-3);
    t.t_idle = rng.uniform(1e-6, 1e-4);
    double t_upd = t.t_conf() + rng.uniform(0.0, 0.2);
    double window = t_upd - t.t_conf();
    double den = t.t_p_ovh + t.t_data + t.t_idle;
    long k = 0;  // smallest k with k * den >= window
    while (double(k) * den < window) ++k;
    ASSERT_EQ(packets_per_update(t, t_upd), k)
        << "window=" << window << " den=" << den;
  }
}

TEST(FrameTiming, OverheadCollapsesToConfWindow) {
  FrameTiming t = published_timing();
  EXPECT_DOUBLE_EQ(overhead_time(t, t.t_conf()), t.t_conf());
  EXPECT_DOUBLE_EQ(overhead_time(t, 0.5 * t.t_conf()), t.t_conf());
}

TEST(FrameTiming, OverheadAtOneSecond) {
  // 3453 packets, each contributing preamble+idle on top of t_conf.
  double t_ovh = overhead_time(published_timing(), 1.0);
  EXPECT_NEAR(t_ovh, 0.10247, 5e-5);
}

TEST(FrameTiming, OverheadShareNearTwoSeconds) {
  FrameTiming t = published_timing();
  double ratio = overhead_time(t, 1.9) / 1.9;
  EXPECT_NEAR(ratio, 0.096, 0.015);
  long packets = packets_per_update(t, 1.9);
  EXPECT_NEAR(double(packets), 6660.0, 666.0);
}

TEST(FrameTiming, EffectiveTxWithoutOverheadIsData) {
  FrameTiming t;
  t.t_data = 3e-4;
  EXPECT_DOUBLE_EQ(effective_tx_period(t, 1.0), 3e-4);
}

TEST(FrameTiming, EffectiveTxAtOneSecond) {
  double t_tx = effective_tx_period(published_timing(), 1.0);
  EXPECT_NEAR(t_tx, 289.7e-6, 0.1e-6);
}

TEST(FrameTiming, EffectiveTxEqualSplitDoublesData) {
  FrameTiming t;
  t.t_p_ovh = 1e-6;
  t.t_data = 99e-6;
  double t_upd = 2e-6;  // one packet: overhead 1e-6 = half of the period
  EXPECT_DOUBLE_EQ(overhead_time(t, t_upd), 0.5 * t_upd);
  EXPECT_DOUBLE_EQ(effective_tx_period(t, t_upd), 2.0 * t.t_data);
}

TEST(FrameTiming, InfeasiblePeriodThrows) {
  FrameTiming t = published_timing();
  EXPECT_FALSE(period_feasible(t, t.t_conf()));
  EXPECT_FALSE(period_feasible(t, t.t_conf() + 1e-7));
  EXPECT_TRUE(period_feasible(t, 1.0));
  try {
    effective_tx_period(t, t.t_conf() + 1e-7);
    FAIL() << "expected an infeasible-period error";
  } catch (const InfeasiblePeriod& e) {
    EXPECT_NE(std::string(e.what()).find("infeasible"), std::string::npos);
  }
}

TEST(FrameTiming, EffectiveTxStrictlyDecreasingWithinSegment) {
  FrameTiming t = published_timing();
  long prev_c = -1;
  double prev_tx = 0.0;
  for (double u = 0.3; u < 0.305; u += 1e-5) {
    long c = packets_per_update(t, u);
    double tx = effective_tx_period(t, u);
    if (c == prev_c) {
      EXPECT_LT(tx, prev_tx) << "at t_upd=" << u;
    }
    prev_c = c;
    prev_tx = tx;
  }
}

TEST(FrameTiming, OverheadShareApproachesPerPacketFloor) {
  FrameTiming t = published_timing();
  double den = t.t_p_ovh + t.t_data + t.t_idle;
  double floor_share = (t.t_p_ovh + t.t_idle) / den;
  double ratio = overhead_time(t, 1000.0) / 1000.0;
  EXPECT_NEAR(ratio, floor_share, 2e-4);
}

}  // namespace
