#pragma once

// Near-field IRS link model: element layout with inscribed-circle mask,
// phase designs (per-element point focus; wide beam via a virtual source
// realizing an affine element->footprint map), complex aperture gain, SNR
// evaluation, heat-map rendering, and the illuminated-radius measurement.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "irspaoi/constants.hpp"
#include "irspaoi/parallel.hpp"
#include "irspaoi/scenario.hpp"

namespace irspaoi {

struct PanelElements {
  std::vector<Vec3> positions;     // row-major (i over n_x, j over n_y)
  std::vector<bool> active;        // inscribed-circle mask
  size_t active_count = 0;
};

// Elements tile the horizontal panel plane centered on p_irs; an element is
// active iff its center lies strictly inside the inscribed circle.
inline PanelElements element_positions(const IrsPanel& panel, const Vec3& p_irs,
                                       double wavelength) {
  PanelElements out;
  double px = panel.pitch_x(wavelength);
  double py = panel.pitch_y(wavelength);
  double mask_r = panel.mask_d(wavelength) / 2.0;
  out.positions.reserve(size_t(panel.n_x) * size_t(panel.n_y));
  out.active.reserve(out.positions.capacity());
  for (int i = 0; i < panel.n_x; ++i) {
    double u = (double(i) - (panel.n_x - 1) / 2.0) * px;
    for (int j = 0; j < panel.n_y; ++j) {
      double w = (double(j) - (panel.n_y - 1) / 2.0) * py;
      out.positions.push_back({p_irs[0] + u, p_irs[1] + w, p_irs[2]});
      bool on = std::sqrt(u * u + w * w) < mask_r;
      out.active.push_back(on);
      if (on) ++out.active_count;
    }
  }
  return out;
}

// Peak gain of a single reflecting element.
inline double element_max_gain(double d_w, double d_h, double wavelength) {
  if (d_w <= 0 || d_h <= 0 || wavelength <= 0)
    throw std::invalid_argument("element dimensions and wavelength must be positive");
  return std::sqrt(4.0 * kPi) * d_w * d_h / wavelength;
}

inline double wrap_phase(double w) {
  double out = std::fmod(w, 2.0 * kPi);
  if (out < 0) out += 2.0 * kPi;
  return out;
}

// Per-element point-focus phases: element n cancels the AP->n path and the
// n->target_n path, so its contribution arrives with zero phase at target_n.
inline std::vector<double> phase_profile(const PanelElements& elems,
                                         const Vec3& p_ap,
                                         const std::vector<Vec3>& targets,
                                         double wavelength) {
  if (targets.size() != elems.positions.size())
    throw std::invalid_argument("focus map size must match element count");
  double k = 2.0 * kPi / wavelength;
  std::vector<double> w(elems.positions.size(), 0.0);
  for (size_t n = 0; n < w.size(); ++n)
    w[n] = wrap_phase(-k * (norm(elems.positions[n], p_ap) +
                            norm(targets[n], elems.positions[n])));
  return w;
}

// Element (i,j) -> point on the rectangle of half-extents (dx, dy) around
// center, on the MU plane; corner elements map to rectangle corners.
inline std::vector<Vec3> rectangle_focus_map(const IrsPanel& panel,
                                             const Vec2& center, double plane_z,
                                             double dx, double dy) {
  std::vector<Vec3> t;
  t.reserve(size_t(panel.n_x) * size_t(panel.n_y));
  for (int i = 0; i < panel.n_x; ++i) {
    double fx = panel.n_x > 1 ? 2.0 * double(i) / (panel.n_x - 1) - 1.0 : 0.0;
    for (int j = 0; j < panel.n_y; ++j) {
      double fy = panel.n_y > 1 ? 2.0 * double(j) / (panel.n_y - 1) - 1.0 : 0.0;
      t.push_back({center[0] + dx * fx, center[1] + dy * fy, plane_z});
    }
  }
  return t;
}

// Wide-beam profile: the beam diverges from a virtual source behind the panel
// (or converges through a real focus for footprints smaller than the
// aperture), so each element's ray continues to its affine image on the MU
// plane — the masked aperture disc maps onto the radius-delta footprint disc.
// delta -> 0 degenerates exactly to the point-focus profile at the center.
inline std::vector<double> wide_beam_profile(const PanelElements& elems,
                                             const IrsPanel& panel,
                                             const Vec3& p_ap,
                                             const Geometry& geom,
                                             double wavelength) {
  double delta = 0.5 * (panel.delta_x + panel.delta_y);
  double lh = panel.mask_d(wavelength) / 2.0;
  Vec3 target_c{geom.illum_center[0], geom.illum_center[1],
                geom.mu_plane_height};
  const Vec3& pc = geom.p_irs;
  double dist = norm(pc, target_c);
  double k = 2.0 * kPi / wavelength;
  std::vector<double> w(elems.positions.size(), 0.0);

  if (std::abs(delta - lh) < 1e-12) {  // collimated: footprint == aperture
    for (size_t n = 0; n < w.size(); ++n)
      w[n] = wrap_phase(-k * norm(elems.positions[n], p_ap));
    return w;
  }
  double ax = (pc[0] - target_c[0]) / dist;
  double ay = (pc[1] - target_c[1]) / dist;
  double az = (pc[2] - target_c[2]) / dist;
  if (delta > lh) {                    // diverging from a virtual source
    double f = lh * dist / (delta - lh);
    Vec3 v{pc[0] + f * ax, pc[1] + f * ay, pc[2] + f * az};
    for (size_t n = 0; n < w.size(); ++n)
      w[n] = wrap_phase(k * (norm(elems.positions[n], v) -
                             norm(elems.positions[n], p_ap)));
  } else {                             // converging through a real focus
    double f = lh * dist / (lh + delta);
    Vec3 v{pc[0] - f * ax, pc[1] - f * ay, pc[2] - f * az};
    for (size_t n = 0; n < w.size(); ++n)
      w[n] = wrap_phase(-k * (norm(elems.positions[n], v) +
                              norm(elems.positions[n], p_ap)));
  }
  return w;
}

// Coherent aperture sum; masked elements contribute zero.
inline std::complex<double> irs_gain(const PanelElements& elems,
                                     const std::vector<double>& phases,
                                     const Vec3& p_ap, const Vec3& p_obs,
                                     double gain_per_element,
                                     double wavelength) {
  if (phases.size() != elems.positions.size())
    throw std::invalid_argument("phase vector size must match element count");
  double k = 2.0 * kPi / wavelength;
  double re = 0.0, im = 0.0;
  for (size_t n = 0; n < phases.size(); ++n) {
    if (!elems.active[n]) continue;
    double arg = k * (norm(elems.positions[n], p_ap) +
                      norm(p_obs, elems.positions[n])) +
                 phases[n];
    re += std::cos(arg);
    im += std::sin(arg);
  }
  return gain_per_element * std::complex<double>(re, im);
}

// Free-space single-hop pathloss.
inline double pathloss(double wavelength, double d) {
  double x = wavelength / (2.0 * kPi * d);
  return x * x;
}

// Linear SNR at an observation point on the MU plane.
inline double snr_at(const ScenarioConfig& cfg, const PanelElements& elems,
                     const std::vector<double>& phases, const Vec3& p_obs) {
  double lam = cfg.radio.wavelength();
  double g_elem = element_max_gain(cfg.panel.pitch_x(lam),
                                   cfg.panel.pitch_y(lam), lam);
  std::complex<double> g =
      irs_gain(elems, phases, cfg.geometry.p_ap, p_obs, g_elem, lam);
  double d1 = norm(cfg.geometry.p_ap, cfg.geometry.p_irs);
  double d2 = norm(cfg.geometry.p_irs, p_obs);
  double p_rx = std::norm(g) * dbm_to_watt(cfg.radio.p_tx_dbm) *
                db_to_linear(cfg.radio.ap_beam_gain_dbi) *
                db_to_linear(cfg.radio.link_gain_db) * pathloss(lam, d1) *
                pathloss(lam, d2);
  return p_rx / dbm_to_watt(cfg.radio.noise_floor_dbm);
}

struct SnrField {
  std::vector<double> x_grid;     // m, strictly increasing
  std::vector<double> y_grid;     // m, strictly increasing
  std::vector<double> snr_db;     // row-major over (x, y)

  double at(size_t ix, size_t iy) const {
    return snr_db[ix * y_grid.size() + iy];
  }
  // Bilinear interpolation in dB, clamped to the grid hull.
  double bilinear_db(double x, double y) const {
    auto locate = [](const std::vector<double>& g, double v, size_t& i,
                     double& f) {
      if (v <= g.front()) { i = 0; f = 0.0; return; }
      if (v >= g.back()) { i = g.size() - 2; f = 1.0; return; }
      size_t lo = 0, hi = g.size() - 1;
      while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        (g[mid] <= v ? lo : hi) = mid;
      }
      i = lo;
      f = (v - g[lo]) / (g[lo + 1] - g[lo]);
    };
    size_t ix, iy;
    double fx, fy;
    locate(x_grid, x, ix, fx);
    locate(y_grid, y, iy, fy);
    double v00 = at(ix, iy), v10 = at(ix + 1, iy);
    double v01 = at(ix, iy + 1), v11 = at(ix + 1, iy + 1);
    return v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy) +
           v01 * (1 - fx) * fy + v11 * fx * fy;
  }
};

struct GridSpec {
  double x_min, x_max, y_min, y_max;
  size_t n_x, n_y;
};

inline SnrField snr_map(const ScenarioConfig& cfg, const PanelElements& elems,
                        const std::vector<double>& phases,
                        const GridSpec& grid) {
  if (grid.n_x < 2 || grid.n_y < 2)
    throw std::invalid_argument("grid needs at least 2 points per axis");
  double step_x = (grid.x_max - grid.x_min) / double(grid.n_x - 1);
  double step_y = (grid.y_max - grid.y_min) / double(grid.n_y - 1);
  if (step_x > cfg.geometry.r_in / 3.0 || step_y > cfg.geometry.r_in / 3.0)
    throw std::invalid_argument(
        "grid too coarse: need at least 3 points per illuminated radius");
  SnrField f;
  f.x_grid.resize(grid.n_x);
  f.y_grid.resize(grid.n_y);
  for (size_t i = 0; i < grid.n_x; ++i) f.x_grid[i] = grid.x_min + double(i) * step_x;
  for (size_t j = 0; j < grid.n_y; ++j) f.y_grid[j] = grid.y_min + double(j) * step_y;
  f.snr_db.assign(grid.n_x * grid.n_y, 0.0);
  double z = cfg.geometry.mu_plane_height;
  parallel_for(grid.n_x, [&](size_t i) {
    for (size_t j = 0; j < grid.n_y; ++j) {
      Vec3 p{f.x_grid[i], f.y_grid[j], z};
      double snr = snr_at(cfg, elems, phases, p);
      f.snr_db[i * grid.n_y + j] =
          snr > 0 ? linear_to_db(snr) : -std::numeric_limits<double>::infinity();
    }
  });
  return f;
}

struct IlluminatedRadius {
  double radius = 0.0;            // m
  bool center_below_threshold = false;
};

// Largest radius whose full perimeter (>= 64 azimuths, bilinear field lookup)
// stays at or above the threshold; scanned to the largest circle the grid
// hull contains.
inline IlluminatedRadius illuminated_radius(const SnrField& field,
                                            double threshold_db,
                                            const Vec2& center,
                                            int azimuths = 64,
                                            double dr = 0.005) {
  IlluminatedRadius out;
  if (field.bilinear_db(center[0], center[1]) < threshold_db) {
    out.center_below_threshold = true;
    return out;
  }
  double r_bound =
      std::min(std::min(center[0] - field.x_grid.front(),
                        field.x_grid.back() - center[0]),
               std::min(center[1] - field.y_grid.front(),
                        field.y_grid.back() - center[1]));
  if (r_bound <= 0) return out;
  auto perimeter_ok = [&](double r) {
    for (int a = 0; a < azimuths; ++a) {
      double th = 2.0 * kPi * double(a) / double(azimuths);
      if (field.bilinear_db(center[0] + r * std::cos(th),
                            center[1] + r * std::sin(th)) < threshold_db)
        return false;
    }
    return true;
  };
  for (double r = dr; r < r_bound; r += dr)
    if (perimeter_ok(r)) out.radius = r;
  if (perimeter_ok(r_bound)) out.radius = r_bound;
  return out;
}

}  // namespace irspaoi
