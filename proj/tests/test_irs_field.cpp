// Near-field IRS link model: element layout and mask, per-element gain,
// phase designs (point focus and wide beam), coherent aperture gain, SNR
// evaluation, heat maps, and the illuminated-radius measurement.

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "irspaoi/irs_field.hpp"
#include "irspaoi/mobility_mc.hpp"

namespace {

using namespace irspaoi;

double wavelength_of(const ScenarioConfig& cfg) {
  return cfg.radio.wavelength();
}

ScenarioConfig small_panel_config(int n) {
  ScenarioConfig cfg;
  cfg.panel.n_x = n;
  cfg.panel.n_y = n;
  return cfg;
}

std::vector<double> random_phases(size_t n, std::uint64_t seed) {
  TrialRng rng(seed);
  std::vector<double> w(n);
  for (double& x : w) x = rng.uniform(0.0, 2.0 * kPi);
  return w;
}

TEST(Elements, SingleElementSitsAtPanelCenter) {
  ScenarioConfig cfg = small_panel_config(1);
  double lam = wavelength_of(cfg);
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  ASSERT_EQ(e.positions.size(), 1u);
  EXPECT_DOUBLE_EQ(e.positions[0][0], cfg.geometry.p_irs[0]);
  EXPECT_DOUBLE_EQ(e.positions[0][1], cfg.geometry.p_irs[1]);
  EXPECT_DOUBLE_EQ(e.positions[0][2], cfg.geometry.p_irs[2]);
  EXPECT_EQ(e.active_count, 1u);
}

TEST(Elements, TwoElementsStraddleTheCenter) {
  ScenarioConfig cfg;
  cfg.panel.n_x = 2;
  cfg.panel.n_y = 1;
  double lam = wavelength_of(cfg);
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  ASSERT_EQ(e.positions.size(), 2u);
  double px = cfg.panel.pitch_x(lam);
  EXPECT_DOUBLE_EQ(e.positions[0][0], cfg.geometry.p_irs[0] - px / 2.0);
  EXPECT_DOUBLE_EQ(e.positions[1][0], cfg.geometry.p_irs[0] + px / 2.0);
  EXPECT_DOUBLE_EQ(e.positions[0][1], e.positions[1][1]);
  EXPECT_DOUBLE_EQ(e.positions[0][2], cfg.geometry.p_irs[2]);
  EXPECT_EQ(e.active_count, 2u);
}

TEST(Elements, ApertureMatchesPitchTimesCount) {
  ScenarioConfig cfg;
  double lam = wavelength_of(cfg);
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  ASSERT_EQ(e.positions.size(), 25600u);
  double min_x = 1e9, max_x = -1e9;
  for (const Vec3& p : e.positions) {
    min_x = std::min(min_x, p[0]);
    max_x = std::max(max_x, p[0]);
  }
  EXPECT_NEAR(max_x - min_x, 159.0 * lam / 2.0, 1e-12);
  EXPECT_NEAR(160.0 * lam / 2.0, 0.3966, 5e-4);  // full aperture side
}

TEST(Elements, InscribedCircleMaskIsExact) {
  ScenarioConfig cfg;
  double lam = wavelength_of(cfg);
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  double mask_r = cfg.panel.mask_d(lam) / 2.0;
  size_t count = 0;
  for (size_t n = 0; n < e.positions.size(); ++n) {
    double dx = e.positions[n][0] - cfg.geometry.p_irs[0];
    double dy = e.positions[n][1] - cfg.geometry.p_irs[1];
    bool inside = std::sqrt(dx * dx + dy * dy) < mask_r;
    ASSERT_EQ(e.active[n], inside) << "element " << n;
    if (inside) ++count;
  }
  EXPECT_EQ(e.active_count, count);
  // Close to the inscribed-circle area fraction pi/4 of the square panel.
  EXPECT_NEAR(double(count) / 25600.0, kPi / 4.0, 0.01);
}

TEST(ElementGain, ClosedFormValues) {
  double lam = 4.956885e-3;
  EXPECT_NEAR(element_max_gain(lam, lam, lam), std::sqrt(4.0 * kPi) * lam,
              1e-15);
  ScenarioConfig cfg;
  double l = wavelength_of(cfg);
  EXPECT_NEAR(element_max_gain(l / 2.0, l / 2.0, l), 4.393e-3, 1e-6);
  EXPECT_DOUBLE_EQ(element_max_gain(2.0 * l, l / 2.0, l),
                   2.0 * element_max_gain(l, l / 2.0, l));
  EXPECT_THROW(element_max_gain(0.0, l, l), std::invalid_argument);
}

TEST(PhaseProfile, ValuesAreWrapped) {
  ScenarioConfig cfg = small_panel_config(8);
  double lam = wavelength_of(cfg);
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  std::vector<Vec3> targets(e.positions.size(),
                            Vec3{2.0, 3.0, cfg.geometry.mu_plane_height});
  std::vector<double> w = phase_profile(e, cfg.geometry.p_ap, targets, lam);
  for (double x : w) {
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 2.0 * kPi);
  }
  targets.pop_back();
  EXPECT_THROW(phase_profile(e, cfg.geometry.p_ap, targets, lam),
               std::invalid_argument);
}

TEST(RectangleFocusMap, CornersMapToCorners) {
  IrsPanel panel;
  panel.n_x = 3;
  panel.n_y = 2;
  std::vector<Vec3> t =
      rectangle_focus_map(panel, Vec2{2.0, 3.0}, 1.5, 0.5, 0.25);
  ASSERT_EQ(t.size(), 6u);
  EXPECT_DOUBLE_EQ(t[0][0], 1.5);   // (i=0, j=0) -> (cx-dx, cy-dy)
  EXPECT_DOUBLE_EQ(t[0][1], 2.75);
  EXPECT_DOUBLE_EQ(t[5][0], 2.5);   // (i=2, j=1) -> (cx+dx, cy+dy)
  EXPECT_DOUBLE_EQ(t[5][1], 3.25);
  EXPECT_DOUBLE_EQ(t[2][0], 2.0);   // middle column
  for (const Vec3& p : t) EXPECT_DOUBLE_EQ(p[2], 1.5);
}

TEST(IrsGain, PointFocusReachesCoherentBound) {
  ScenarioConfig cfg = small_panel_config(16);
  double lam = wavelength_of(cfg);
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  double g_elem = element_max_gain(cfg.panel.pitch_x(lam),
                                   cfg.panel.pitch_y(lam), lam);
  Vec3 focus{2.0, 3.0, cfg.geometry.mu_plane_height};
  std::vector<Vec3> targets(e.positions.size(), focus);
  std::vector<double> w = phase_profile(e, cfg.geometry.p_ap, targets, lam);
  std::complex<double> g = irs_gain(e, w, cfg.geometry.p_ap, focus, g_elem,
                                    lam);
  double bound = double(e.active_count) * g_elem;
  EXPECT_NEAR(std::abs(g), bound, 1e-9 * bound);
}

TEST(IrsGain, TriangleInequalityAndPhaseInvariance) {
  ScenarioConfig cfg = small_panel_config(16);
  double lam = wavelength_of(cfg);
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  double g_elem = element_max_gain(cfg.panel.pitch_x(lam),
                                   cfg.panel.pitch_y(lam), lam);
  std::vector<double> w = random_phases(e.positions.size(), 4);
  Vec3 obs{1.1, 2.7, cfg.geometry.mu_plane_height};
  std::complex<double> g = irs_gain(e, w, cfg.geometry.p_ap, obs, g_elem,
                                    lam);
  double bound = double(e.active_count) * g_elem;
  EXPECT_LE(std::abs(g), bound * (1.0 + 1e-12));
  EXPECT_LT(std::abs(g), 0.9 * bound);  // random phases do not cohere

  std::vector<double> shifted = w;
  for (double& x : shifted) x = wrap_phase(x + 1.234);
  std::complex<double> g2 = irs_gain(e, shifted, cfg.geometry.p_ap, obs,
                                     g_elem, lam);
  EXPECT_NEAR(std::abs(g2), std::abs(g), 1e-9 * std::abs(g) + 1e-15);
}

TEST(IrsGain, AllMaskedPanelHasZeroGainAndSnr) {
  ScenarioConfig cfg;
  cfg.panel.n_x = 2;
  cfg.panel.n_y = 2;
  cfg.panel.mask_diameter = 1e-9;
  double lam = wavelength_of(cfg);
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  EXPECT_EQ(e.active_count, 0u);
  std::vector<double> w(e.positions.size(), 0.0);
  double g_elem = element_max_gain(cfg.panel.pitch_x(lam),
                                   cfg.panel.pitch_y(lam), lam);
  Vec3 obs{2.0, 3.0, 1.5};
  EXPECT_DOUBLE_EQ(std::abs(irs_gain(e, w, cfg.geometry.p_ap, obs, g_elem,
                                     lam)),
                   0.0);
  EXPECT_DOUBLE_EQ(snr_at(cfg, e, w, obs), 0.0);
}

TEST(WideBeam, ZeroExtentDegeneratesToPointFocus) {
  ScenarioConfig cfg = small_panel_config(16);
  cfg.panel.delta_x = 0.0;
  cfg.panel.delta_y = 0.0;
  double lam = wavelength_of(cfg);
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  std::vector<double> wide =
      wide_beam_profile(e, cfg.panel, cfg.geometry.p_ap, cfg.geometry, lam);
  Vec3 center{cfg.geometry.illum_center[0], cfg.geometry.illum_center[1],
              cfg.geometry.mu_plane_height};
  std::vector<Vec3> targets(e.positions.size(), center);
  std::vector<double> focus =
      phase_profile(e, cfg.geometry.p_ap, targets, lam);
  ASSERT_EQ(wide.size(), focus.size());
  for (size_t n = 0; n < wide.size(); ++n) {
    double d = std::abs(wide[n] - focus[n]);
    d = std::min(d, 2.0 * kPi - d);  // wrapped distance
    ASSERT_NEAR(d, 0.0, 1e-8) << "element " << n;
  }
}

TEST(Pathloss, OneMeterReference) {
  ScenarioConfig cfg;
  double lam = wavelength_of(cfg);
  double pl = pathloss(lam, 1.0);
  EXPECT_NEAR(pl, 6.224e-7, 1e-10);
  EXPECT_NEAR(linear_to_db(pl), -62.1, 0.06);
  EXPECT_NEAR(pathloss(lam, 2.0), pl / 4.0, 1e-18);
}

TEST(SnrAt, InverseSquareInBothHops) {
  ScenarioConfig cfg = small_panel_config(1);
  cfg.geometry.p_irs = {0.0, 0.0, 1.0};
  cfg.geometry.p_ap = {1.0, 0.0, 1.0};   // d1 = 1
  double lam = wavelength_of(cfg);
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  std::vector<double> w(1, 0.0);
  double near = snr_at(cfg, e, w, Vec3{0.0, 2.0, 1.0});  // d2 = 2
  cfg.geometry.p_ap = {2.0, 0.0, 1.0};   // d1 = 2
  double far = snr_at(cfg, e, w, Vec3{0.0, 4.0, 1.0});   // d2 = 4
  EXPECT_NEAR(near / far, 16.0, 1e-9);
}

TEST(SnrMap, RejectsCoarseGrid) {
  ScenarioConfig cfg = small_panel_config(4);
  double lam = wavelength_of(cfg);
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  std::vector<double> w(e.positions.size(), 0.0);
  GridSpec grid{0.0, 4.0, 1.0, 5.0, 5, 5};  // 1 m step vs r_in/3 = 0.57 m
  EXPECT_THROW(snr_map(cfg, e, w, grid), std::invalid_argument);
  GridSpec degenerate{0.0, 4.0, 1.0, 5.0, 1, 5};
  EXPECT_THROW(snr_map(cfg, e, w, degenerate), std::invalid_argument);
}

TEST(SnrMap, FieldIsSymmetricAcrossTheBoresightPlane) {
  // AP, panel center, and footprint center all sit on the x = 2 plane.
  ScenarioConfig cfg;
  double lam = wavelength_of(cfg);
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  std::vector<double> w =
      wide_beam_profile(e, cfg.panel, cfg.geometry.p_ap, cfg.geometry, lam);
  GridSpec grid{0.0, 4.0, 1.0, 5.0, 17, 17};
  SnrField f = snr_map(cfg, e, w, grid);
  for (size_t i = 0; i < 17; ++i)
    for (size_t j = 0; j < 17; ++j)
      ASSERT_NEAR(f.at(i, j), f.at(16 - i, j), 1e-6)
          << "i=" << i << " j=" << j;
}

class WideBeamField : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    cfg_ = new ScenarioConfig;
    double lam = cfg_->radio.wavelength();
    elems_ = new PanelElements(
        element_positions(cfg_->panel, cfg_->geometry.p_irs, lam));
    phases_ = new std::vector<double>(wide_beam_profile(
        *elems_, cfg_->panel, cfg_->geometry.p_ap, cfg_->geometry, lam));
    GridSpec grid{2.0 - 2.2, 2.0 + 2.2, 3.0 - 2.2, 3.0 + 2.2, 89, 89};
    field_ = new SnrField(snr_map(*cfg_, *elems_, *phases_, grid));
  }
  static void TearDownTestSuite() {
    delete cfg_;
    delete elems_;
    delete phases_;
    delete field_;
  }
  static ScenarioConfig* cfg_;
  static PanelElements* elems_;
  static std::vector<double>* phases_;
  static SnrField* field_;
};

ScenarioConfig* WideBeamField::cfg_ = nullptr;
PanelElements* WideBeamField::elems_ = nullptr;
std::vector<double>* WideBeamField::phases_ = nullptr;
SnrField* WideBeamField::field_ = nullptr;

TEST_F(WideBeamField, CenterExceedsServiceThreshold) {
  double center = field_->bilinear_db(2.0, 3.0);
  EXPECT_GT(center, 30.0);
  EXPECT_LT(center, 60.0);
}

TEST_F(WideBeamField, ServiceDiscRadiusMatchesDesign) {
  IlluminatedRadius r = illuminated_radius(*field_, 30.0, Vec2{2.0, 3.0});
  EXPECT_FALSE(r.center_below_threshold);
  EXPECT_GE(r.radius, 1.4);
  EXPECT_LE(r.radius, 2.0);
}

TEST_F(WideBeamField, RadiusIsMonotoneInThreshold) {
  IlluminatedRadius lo = illuminated_radius(*field_, 30.0, Vec2{2.0, 3.0});
  IlluminatedRadius hi = illuminated_radius(*field_, 35.0, Vec2{2.0, 3.0});
  EXPECT_LE(hi.radius, lo.radius);
}

TEST_F(WideBeamField, ExtremeThresholdsHitTheBounds) {
  IlluminatedRadius none = illuminated_radius(*field_, 200.0, Vec2{2.0, 3.0});
  EXPECT_TRUE(none.center_below_threshold);
  EXPECT_DOUBLE_EQ(none.radius, 0.0);
  IlluminatedRadius all = illuminated_radius(*field_, -1e30, Vec2{2.0, 3.0});
  EXPECT_NEAR(all.radius, 2.2, 1e-9);  // grid hull bound
}

TEST(IlluminatedRadius, RandomPhasesFormNoServiceDisc) {
  ScenarioConfig cfg;
  double lam = cfg.radio.wavelength();
  PanelElements e = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  std::vector<double> w = random_phases(e.positions.size(), 1);
  GridSpec grid{2.0 - 1.6, 2.0 + 1.6, 3.0 - 1.6, 3.0 + 1.6, 17, 17};
  SnrField f = snr_map(cfg, e, w, grid);
  IlluminatedRadius r = illuminated_radius(f, 30.0, Vec2{2.0, 3.0});
  EXPECT_LT(r.radius, 0.85);
}

}  // namespace
