#pragma once

// Experiment configuration: geometry, radio, IRS panel, frame, mobility,
// numerics. All internal computation is in SI base units (seconds, meters,
// hertz, linear power); dB/dBm appear only at I/O boundaries.

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "irspaoi/constants.hpp"
#include "irspaoi/tomlmini.hpp"

namespace irspaoi {

using Vec3 = std::array<double, 3>;
using Vec2 = std::array<double, 2>;

inline double norm(const Vec3& a, const Vec3& b) {
  double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct Geometry {
  Vec3 p_ap{2.0, 0.0, 2.5};
  Vec3 p_irs{2.0, 3.0, 3.0};
  double mu_plane_height = 1.5;           // m
  double r_in = 1.7;                      // m, illuminated radius
  double r_out = 3.0;                     // m, mobility area radius
  Vec2 illum_center{2.0, 3.0};            // m, disc center on the MU plane
};

struct RadioParams {
  double f_c = 60.48e9;                   // Hz
  double p_tx_dbm = 30.0;
  double noise_floor_dbm = -70.0;
  double ap_beam_gain_dbi = 9.0;
  // Link-budget calibration: makes the reconstructed wide beam meet the
  // 30 dB service threshold at the published 1.7 m radius (the stated
  // powers alone leave the field ~50 dB short of that operating point).
  double link_gain_db = 67.15;

  double wavelength() const { return kSpeedOfLight / f_c; }
};

struct IrsPanel {
  int n_x = 160;
  int n_y = 160;
  double d_w = 0.0;                       // m; 0 -> lambda/2 pitch
  double d_h = 0.0;                       // m; 0 -> lambda/2 pitch
  double delta_x = 1.7;                   // m, beam half-extent
  double delta_y = 1.7;                   // m, beam half-extent
  double mask_diameter = 0.0;             // m; 0 -> n_x * pitch

  double pitch_x(double wavelength) const { return d_w > 0 ? d_w : wavelength / 2; }
  double pitch_y(double wavelength) const { return d_h > 0 ? d_h : wavelength / 2; }
  double mask_d(double wavelength) const {
    return mask_diameter > 0 ? mask_diameter : n_x * pitch_x(wavelength);
  }
};

struct FrameInputs {
  double f_s = 1.76e9;                    // sample rate, Hz
  double preamble_samples = 4352;
  double data_samples = 456768;
  double training_samples = 3712;
  double t_idle = 20e-6;                  // s
  double irs_coeff_bits = 32;             // bits per coefficient
  double loc_blocks = 121;                // localization grid blocks
  double loc_tx_per_block = 2;
  // Coefficient payload -> samples factor, calibrated so the
  // reconfiguration packet lasts 105.4 us under the default panel.
  double samples_per_bit = 0.2166015625;
  double t_p_ovh_override = 0.0;          // s; 0 -> derive from sample counts
};

enum class MobilityVariant { ConstantSpeed, WithPause, RandomSpeed };

struct MobilitySpec {
  MobilityVariant variant = MobilityVariant::ConstantSpeed;
  double v = 1.0;                         // m/s (ConstantSpeed, WithPause)
  double pause_mean = 2.0;                // s (WithPause)
  double v_min = 0.5;                     // m/s (RandomSpeed)
  double v_max = 1.5;                     // m/s (RandomSpeed)

  // Fastest traversal speed: bounds the minimum center->boundary time.
  double max_speed() const {
    return variant == MobilityVariant::RandomSpeed ? v_max : v;
  }
};

struct NumericsParams {
  double dt = 1e-3;                       // s, time-grid step
  double t_max = 60.0;                    // s, grid horizon
  double trunc_eps = 1e-6;                // jump-count tail cutoff
  long mc_trials = 1000;
  unsigned long long rng_seed = 12345;
};

enum class KernelMode { Complement, Literal };
enum class KernelShift { Literal, Delayed };
enum class LegConvention { IncludeLast, ExcludeLast };

struct KernelOptions {
  KernelMode mode = KernelMode::Complement;
  KernelShift shift = KernelShift::Literal;
  LegConvention legs = LegConvention::IncludeLast;
};

struct ScenarioConfig {
  int schema_version = 1;
  Geometry geometry;
  RadioParams radio;
  IrsPanel panel;
  FrameInputs frame;
  MobilitySpec mobility;
  NumericsParams numerics;
  KernelOptions kernel;
};

inline std::string to_string(MobilityVariant v) {
  switch (v) {
    case MobilityVariant::ConstantSpeed: return "constant";
    case MobilityVariant::WithPause: return "pause";
    default: return "random_speed";
  }
}

inline std::string to_string(KernelMode m) {
  return m == KernelMode::Complement ? "complement" : "literal";
}

inline std::string to_string(KernelShift s) {
  return s == KernelShift::Literal ? "literal" : "delayed";
}

inline std::string to_string(LegConvention l) {
  return l == LegConvention::IncludeLast ? "include_last" : "exclude_last";
}

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline MobilityVariant mobility_variant_from_string(const std::string& s) {
  if (s == "constant") return MobilityVariant::ConstantSpeed;
  if (s == "pause") return MobilityVariant::WithPause;
  if (s == "random_speed") return MobilityVariant::RandomSpeed;
  throw ConfigError("unknown mobility variant '" + s + "'");
}

inline KernelMode kernel_mode_from_string(const std::string& s) {
  if (s == "complement") return KernelMode::Complement;
  if (s == "literal") return KernelMode::Literal;
  throw ConfigError("unknown kernel mode '" + s + "'");
}

inline KernelShift kernel_shift_from_string(const std::string& s) {
  if (s == "literal") return KernelShift::Literal;
  if (s == "delayed") return KernelShift::Delayed;
  throw ConfigError("unknown kernel shift '" + s + "'");
}

inline LegConvention leg_convention_from_string(const std::string& s) {
  if (s == "include_last") return LegConvention::IncludeLast;
  if (s == "exclude_last") return LegConvention::ExcludeLast;
  throw ConfigError("unknown leg convention '" + s + "'");
}

inline void validate(const ScenarioConfig& c) {
  auto require = [](bool ok, const std::string& inv) {
    if (!ok) throw ConfigError("config invariant violated: " + inv);
  };
  require(c.geometry.r_in > 0, "r_in > 0");
  require(c.geometry.r_out > c.geometry.r_in, "r_out > r_in");
  require(c.geometry.p_irs[2] > c.geometry.mu_plane_height,
          "p_irs height > mu_plane_height");
  require(c.radio.f_c > 0, "f_c > 0");
  require(std::isfinite(c.radio.p_tx_dbm) && std::isfinite(c.radio.noise_floor_dbm),
          "powers finite");
  require(c.panel.n_x >= 1 && c.panel.n_y >= 1, "n_x*n_y >= 1");
  require(c.panel.d_w >= 0 && c.panel.d_h >= 0, "element size >= 0");
  require(c.frame.f_s > 0, "f_s > 0");
  require(c.frame.preamble_samples > 0 && c.frame.data_samples > 0 &&
              c.frame.training_samples > 0,
          "sample counts > 0");
  require(c.frame.t_idle > 0, "t_idle > 0");
  require(c.mobility.v > 0 || c.mobility.variant == MobilityVariant::RandomSpeed,
          "speed > 0");
  if (c.mobility.variant == MobilityVariant::RandomSpeed)
    require(c.mobility.v_max > c.mobility.v_min && c.mobility.v_min > 0,
            "v_max > v_min > 0");
  if (c.mobility.variant == MobilityVariant::WithPause)
    require(c.mobility.pause_mean > 0, "pause_mean > 0");
  require(c.numerics.dt > 0, "dt > 0");
  require(c.numerics.t_max >= 100 * c.numerics.dt, "t_max >= 100*dt");
  require(c.numerics.trunc_eps > 0 && c.numerics.trunc_eps < 1e-2,
          "0 < trunc_eps < 1e-2");
  require(c.numerics.mc_trials > 0, "mc_trials > 0");
}

// Waypoint-selection probability for the inner disc: (r_in / r_out)^2.
inline double area_ratio(const Geometry& g) {
  if (!(g.r_out > g.r_in && g.r_in > 0))
    throw ConfigError("config invariant violated: r_out > r_in > 0");
  double ratio = g.r_in / g.r_out;
  return ratio * ratio;
}

namespace detail {

inline double num(const tomlmini::Table& t, const std::string& key, double dflt) {
  auto it = t.find(key);
  if (it == t.end()) return dflt;
  if (it->second.kind != tomlmini::Value::Kind::Number)
    throw ConfigError("key '" + key + "' must be a number");
  return it->second.number;
}

inline std::string str(const tomlmini::Table& t, const std::string& key,
                       const std::string& dflt) {
  auto it = t.find(key);
  if (it == t.end()) return dflt;
  if (it->second.kind != tomlmini::Value::Kind::String)
    throw ConfigError("key '" + key + "' must be a string");
  return it->second.str;
}

inline Vec3 vec3(const tomlmini::Table& t, const std::string& key, Vec3 dflt) {
  auto it = t.find(key);
  if (it == t.end()) return dflt;
  if (it->second.kind != tomlmini::Value::Kind::Array ||
      it->second.array.size() != 3)
    throw ConfigError("key '" + key + "' must be a 3-element array");
  return {it->second.array[0], it->second.array[1], it->second.array[2]};
}

inline Vec2 vec2(const tomlmini::Table& t, const std::string& key, Vec2 dflt) {
  auto it = t.find(key);
  if (it == t.end()) return dflt;
  if (it->second.kind != tomlmini::Value::Kind::Array ||
      it->second.array.size() != 2)
    throw ConfigError("key '" + key + "' must be a 2-element array");
  return {it->second.array[0], it->second.array[1]};
}

inline const tomlmini::Table& section(const tomlmini::Document& d,
                                      const std::string& name) {
  static const tomlmini::Table empty;
  auto it = d.find(name);
  return it == d.end() ? empty : it->second;
}

}  // namespace detail

inline ScenarioConfig config_from_toml(const tomlmini::Document& doc) {
  ScenarioConfig c;
  using namespace detail;
  const auto& root = section(doc, "");
  c.schema_version = static_cast<int>(num(root, "schema_version", 1));

  const auto& g = section(doc, "geometry");
  c.geometry.p_ap = vec3(g, "p_ap_m", c.geometry.p_ap);
  c.geometry.p_irs = vec3(g, "p_irs_m", c.geometry.p_irs);
  c.geometry.mu_plane_height = num(g, "mu_plane_height_m", c.geometry.mu_plane_height);
  c.geometry.r_in = num(g, "r_in_m", c.geometry.r_in);
  c.geometry.r_out = num(g, "r_out_m", c.geometry.r_out);
  c.geometry.illum_center = vec2(g, "illum_center_m", c.geometry.illum_center);

  const auto& r = section(doc, "radio");
  c.radio.f_c = num(r, "f_c_hz", c.radio.f_c);
  c.radio.p_tx_dbm = num(r, "p_tx_dbm", c.radio.p_tx_dbm);
  c.radio.noise_floor_dbm = num(r, "noise_floor_dbm", c.radio.noise_floor_dbm);
  c.radio.ap_beam_gain_dbi = num(r, "ap_beam_gain_dbi", c.radio.ap_beam_gain_dbi);
  c.radio.link_gain_db = num(r, "link_gain_db", c.radio.link_gain_db);

  const auto& p = section(doc, "panel");
  c.panel.n_x = static_cast<int>(num(p, "n_x", c.panel.n_x));
  c.panel.n_y = static_cast<int>(num(p, "n_y", c.panel.n_y));
  c.panel.d_w = num(p, "d_w_m", c.panel.d_w);
  c.panel.d_h = num(p, "d_h_m", c.panel.d_h);
  c.panel.delta_x = num(p, "delta_x_m", c.panel.delta_x);
  c.panel.delta_y = num(p, "delta_y_m", c.panel.delta_y);
  c.panel.mask_diameter = num(p, "mask_diameter_m", c.panel.mask_diameter);

  const auto& f = section(doc, "frame");
  c.frame.f_s = num(f, "f_s_hz", c.frame.f_s);
  c.frame.preamble_samples = num(f, "preamble_samples", c.frame.preamble_samples);
  c.frame.data_samples = num(f, "data_samples", c.frame.data_samples);
  c.frame.training_samples = num(f, "training_samples", c.frame.training_samples);
  c.frame.t_idle = num(f, "t_idle_s", c.frame.t_idle);
  c.frame.irs_coeff_bits = num(f, "irs_coeff_bits", c.frame.irs_coeff_bits);
  c.frame.loc_blocks = num(f, "loc_blocks", c.frame.loc_blocks);
  c.frame.loc_tx_per_block = num(f, "loc_tx_per_block", c.frame.loc_tx_per_block);
  c.frame.samples_per_bit = num(f, "samples_per_bit", c.frame.samples_per_bit);
  c.frame.t_p_ovh_override = num(f, "t_p_ovh_override_s", c.frame.t_p_ovh_override);

  const auto& m = section(doc, "mobility");
  c.mobility.variant = mobility_variant_from_string(str(m, "variant", "constant"));
  c.mobility.v = num(m, "v_mps", c.mobility.v);
  c.mobility.pause_mean = num(m, "pause_mean_s", c.mobility.pause_mean);
  c.mobility.v_min = num(m, "v_min_mps", c.mobility.v_min);
  c.mobility.v_max = num(m, "v_max_mps", c.mobility.v_max);

  const auto& n = section(doc, "numerics");
  c.numerics.dt = num(n, "dt_s", c.numerics.dt);
  c.numerics.t_max = num(n, "t_max_s", c.numerics.t_max);
  c.numerics.trunc_eps = num(n, "trunc_eps", c.numerics.trunc_eps);
  c.numerics.mc_trials = static_cast<long>(num(n, "mc_trials", double(c.numerics.mc_trials)));
  c.numerics.rng_seed = static_cast<unsigned long long>(
      num(n, "rng_seed", double(c.numerics.rng_seed)));

  const auto& k = section(doc, "kernel");
  c.kernel.mode = kernel_mode_from_string(str(k, "mode", "complement"));
  c.kernel.shift = kernel_shift_from_string(str(k, "shift", "literal"));
  c.kernel.legs = leg_convention_from_string(str(k, "leg_convention", "include_last"));

  validate(c);
  return c;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return config_from_toml(tomlmini::parse(buf.str()));
  } catch (const tomlmini::ParseError& e) {
    throw ConfigError("config parse failure (" + path + "): " + e.what());
  }
}

inline std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream o;
  o.precision(17);
  auto vec3s = [&](const Vec3& v) {
    std::ostringstream s; s.precision(17);
    s << "[" << v[0] << ", " << v[1] << ", " << v[2] << "]";
    return s.str();
  };
  auto vec2s = [&](const Vec2& v) {
    std::ostringstream s; s.precision(17);
    s << "[" << v[0] << ", " << v[1] << "]";
    return s.str();
  };
  o << "schema_version = " << c.schema_version << "\n\n[geometry]\n";
  o << "p_ap_m = " << vec3s(c.geometry.p_ap) << "\n";
  o << "p_irs_m = " << vec3s(c.geometry.p_irs) << "\n";
  o << "mu_plane_height_m = " << c.geometry.mu_plane_height << "\n";
  o << "r_in_m = " << c.geometry.r_in << "\n";
  o << "r_out_m = " << c.geometry.r_out << "\n";
  o << "illum_center_m = " << vec2s(c.geometry.illum_center) << "\n";
  o << "\n[radio]\n";
  o << "f_c_hz = " << c.radio.f_c << "\n";
  o << "p_tx_dbm = " << c.radio.p_tx_dbm << "\n";
  o << "noise_floor_dbm = " << c.radio.noise_floor_dbm << "\n";
  o << "ap_beam_gain_dbi = " << c.radio.ap_beam_gain_dbi << "\n";
  o << "link_gain_db = " << c.radio.link_gain_db << "\n";
  o << "\n[panel]\n";
  o << "n_x = " << c.panel.n_x << "\n";
  o << "n_y = " << c.panel.n_y << "\n";
  o << "d_w_m = " << c.panel.d_w << "\n";
  o << "d_h_m = " << c.panel.d_h << "\n";
  o << "delta_x_m = " << c.panel.delta_x << "\n";
  o << "delta_y_m = " << c.panel.delta_y << "\n";
  o << "mask_diameter_m = " << c.panel.mask_diameter << "\n";
  o << "\n[frame]\n";
  o << "f_s_hz = " << c.frame.f_s << "\n";
  o << "preamble_samples = " << c.frame.preamble_samples << "\n";
  o << "data_samples = " << c.frame.data_samples << "\n";
  o << "training_samples = " << c.frame.training_samples << "\n";
  o << "t_idle_s = " << c.frame.t_idle << "\n";
  o << "irs_coeff_bits = " << c.frame.irs_coeff_bits << "\n";
  o << "loc_blocks = " << c.frame.loc_blocks << "\n";
  o << "loc_tx_per_block = " << c.frame.loc_tx_per_block << "\n";
  o << "samples_per_bit = " << c.frame.samples_per_bit << "\n";
  o << "t_p_ovh_override_s = " << c.frame.t_p_ovh_override << "\n";
  o << "\n[mobility]\n";
  o << "variant = \"" << to_string(c.mobility.variant) << "\"\n";
  o << "v_mps = " << c.mobility.v << "\n";
  o << "pause_mean_s = " << c.mobility.pause_mean << "\n";
  o << "v_min_mps = " << c.mobility.v_min << "\n";
  o << "v_max_mps = " << c.mobility.v_max << "\n";
  o << "\n[numerics]\n";
  o << "dt_s = " << c.numerics.dt << "\n";
  o << "t_max_s = " << c.numerics.t_max << "\n";
  o << "trunc_eps = " << c.numerics.trunc_eps << "\n";
  o << "mc_trials = " << c.numerics.mc_trials << "\n";
  o << "rng_seed = " << c.numerics.rng_seed << "\n";
  o << "\n[kernel]\n";
  o << "mode = \"" << to_string(c.kernel.mode) << "\"\n";
  o << "shift = \"" << to_string(c.kernel.shift) << "\"\n";
  o << "leg_convention = \"" << to_string(c.kernel.legs) << "\"\n";
  return o.str();
}

}  // namespace irspaoi
