// Configuration schema: parsing, validation, serialization round-trip, and
// the inner/outer disc area ratio.

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <string>

#include "irspaoi/scenario.hpp"

namespace {

using namespace irspaoi;

ScenarioConfig from_text(const std::string& text) {
  return config_from_toml(tomlmini::parse(text));
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream out(path);
  out << text;
  return path;
}

TEST(Scenario, LoadsExplicitValues) {
  std::string path = write_temp("scenario_basic.toml",
                                "[geometry]\n"
                                "r_in_m = 1.7\n"
                                "r_out_m = 3.0\n"
                                "[mobility]\n"
                                "v_mps = 1.0\n"
                                "[radio]\n"
                                "f_c_hz = 60.48e9\n");
  ScenarioConfig c = load_config(path);
  EXPECT_DOUBLE_EQ(c.geometry.r_in, 1.7);
  EXPECT_DOUBLE_EQ(c.geometry.r_out, 3.0);
  EXPECT_DOUBLE_EQ(c.mobility.v, 1.0);
  EXPECT_DOUBLE_EQ(c.radio.f_c, 60.48e9);
}

TEST(Scenario, DefaultsMatchBaselineScenario) {
  ScenarioConfig c = from_text("");
  EXPECT_DOUBLE_EQ(c.geometry.r_in, 1.7);
  EXPECT_DOUBLE_EQ(c.geometry.r_out, 3.0);
  EXPECT_DOUBLE_EQ(c.geometry.mu_plane_height, 1.5);
  EXPECT_DOUBLE_EQ(c.geometry.p_irs[2], 3.0);
  EXPECT_DOUBLE_EQ(c.radio.f_c, 60.48e9);
  EXPECT_DOUBLE_EQ(c.radio.p_tx_dbm, 30.0);
  EXPECT_DOUBLE_EQ(c.radio.noise_floor_dbm, -70.0);
  EXPECT_EQ(c.panel.n_x, 160);
  EXPECT_EQ(c.panel.n_y, 160);
  EXPECT_DOUBLE_EQ(c.mobility.v, 1.0);
  EXPECT_DOUBLE_EQ(c.mobility.pause_mean, 2.0);
  EXPECT_DOUBLE_EQ(c.numerics.dt, 1e-3);
  EXPECT_DOUBLE_EQ(c.numerics.t_max, 60.0);
  EXPECT_DOUBLE_EQ(c.numerics.trunc_eps, 1e-6);
  EXPECT_EQ(c.numerics.mc_trials, 1000);
  EXPECT_EQ(c.kernel.mode, KernelMode::Complement);
  EXPECT_EQ(c.kernel.legs, LegConvention::IncludeLast);
  EXPECT_NO_THROW(validate(c));
}

TEST(Scenario, RejectsRadiusOrdering) {
  // Loading validates eagerly, so the bad ordering is rejected at parse time.
  try {
    from_text("[geometry]\nr_in_m = 3.0\nr_out_m = 3.0\n");
    FAIL() << "expected a validation error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("r_out > r_in"), std::string::npos)
        << e.what();
  }
}

TEST(Scenario, RejectsNonPositiveTimeStep) {
  try {
    from_text("[numerics]\ndt_s = 0.0\n");
    FAIL() << "expected a validation error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("dt > 0"), std::string::npos)
        << e.what();
  }
}

TEST(Scenario, RejectsBadMobilityVariant) {
  EXPECT_THROW(from_text("[mobility]\nvariant = \"teleport\"\n"), ConfigError);
}

TEST(Scenario, RejectsMalformedToml) {
  EXPECT_THROW(tomlmini::parse("[geometry\nr_in_m = 1"),
               tomlmini::ParseError);
  EXPECT_THROW(tomlmini::parse("just words without equals"),
               tomlmini::ParseError);
}

TEST(Scenario, LoadMissingFileFails) {
  EXPECT_THROW(load_config("/nonexistent/path/cfg.toml"), ConfigError);
}

TEST(Scenario, SerializeRoundTripIsIdentity) {
  ScenarioConfig c = from_text(
      "[geometry]\nr_in_m = 1.2\n[mobility]\nvariant = \"pause\"\n"
      "pause_mean_s = 2.5\n[kernel]\nmode = \"literal\"\n"
      "leg_convention = \"exclude_last\"\n[numerics]\nrng_seed = 99\n");
  std::string once = serialize_config(c);
  ScenarioConfig back = from_text(once);
  std::string twice = serialize_config(back);
  EXPECT_EQ(once, twice);
  EXPECT_DOUBLE_EQ(back.geometry.r_in, 1.2);
  EXPECT_EQ(back.mobility.variant, MobilityVariant::WithPause);
  EXPECT_DOUBLE_EQ(back.mobility.pause_mean, 2.5);
  EXPECT_EQ(back.kernel.mode, KernelMode::Literal);
  EXPECT_EQ(back.kernel.legs, LegConvention::ExcludeLast);
  EXPECT_EQ(back.numerics.rng_seed, 99ull);
}

TEST(Scenario, EnumStringsRoundTrip) {
  for (auto v : {MobilityVariant::ConstantSpeed, MobilityVariant::WithPause,
                 MobilityVariant::RandomSpeed})
    EXPECT_EQ(mobility_variant_from_string(to_string(v)), v);
  for (auto m : {KernelMode::Complement, KernelMode::Literal})
    EXPECT_EQ(kernel_mode_from_string(to_string(m)), m);
  for (auto s : {KernelShift::Literal, KernelShift::Delayed})
    EXPECT_EQ(kernel_shift_from_string(to_string(s)), s);
  for (auto l : {LegConvention::IncludeLast, LegConvention::ExcludeLast})
    EXPECT_EQ(leg_convention_from_string(to_string(l)), l);
}

TEST(Scenario, AreaRatioBaseline) {
  Geometry g;
  g.r_in = 1.7;
  g.r_out = 3.0;
  EXPECT_NEAR(area_ratio(g), 0.32111, 2e-5);
}

TEST(Scenario, AreaRatioHalfAndNinth) {
  Geometry g;
  g.r_out = 1.0;
  g.r_in = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(area_ratio(g), 0.5, 1e-12);
  g.r_out = 3.0;
  g.r_in = 1.0;
  EXPECT_NEAR(area_ratio(g), 1.0 / 9.0, 1e-12);
}

TEST(Scenario, AreaRatioMonotone) {
  Geometry g;
  g.r_out = 3.0;
  double prev = 0.0;
  for (double r : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    g.r_in = r;
    double a = area_ratio(g);
    EXPECT_GT(a, prev);
    prev = a;
  }
  g.r_in = 1.7;
  g.r_out = 2.0;
  double tight = area_ratio(g);
  g.r_out = 4.0;
  EXPECT_LT(area_ratio(g), tight);
}

TEST(Scenario, BaselineConfigFileLoadsAndValidates) {
  // The checked-in baseline config must parse and satisfy every invariant.
#ifdef IRS_PAOI_CONFIG_DIR
  std::string path = std::string(IRS_PAOI_CONFIG_DIR) + "/baseline.toml";
#else
  std::string path = "configs/baseline.toml";
#endif
  std::ifstream probe(path);
  if (!probe.good()) GTEST_SKIP() << "baseline config not found at " << path;
  ScenarioConfig c = load_config(path);
  EXPECT_NO_THROW(validate(c));
  EXPECT_DOUBLE_EQ(c.geometry.r_in, 1.7);
  EXPECT_DOUBLE_EQ(c.radio.link_gain_db, 67.15);
}

}  // namespace
