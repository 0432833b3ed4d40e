#pragma once

// Peak age of information: per-cycle peaks for served/unserved users,
// the steady-state average, the average-age curve over a grid of update
// periods, its minimizer, and the radius sweep.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "irspaoi/frame_timing.hpp"
#include "irspaoi/hitting.hpp"
#include "irspaoi/mrgp.hpp"
#include "irspaoi/parallel.hpp"
#include "irspaoi/scenario.hpp"

namespace irspaoi {

// Age peak when the user is served every transmission period.
inline double peak_age_inside(double t_d, double t_tx) { return t_d + t_tx; }

// Age peak when service pauses for an outage of length t_o: the next update
// lands on the first period boundary at or after the outage ends.
inline double peak_age_outside(double t_d, double t_tx, double t_o) {
  if (t_tx <= 0) throw std::invalid_argument("transmission period must be positive");
  if (t_o < 0) throw std::invalid_argument("outage must be nonnegative");
  return t_d + t_tx + std::ceil(t_o / t_tx) * t_tx;
}

// Steady-state average of the age peaks, mixing the served peak with the
// outage-extended peak by the adjusted out-of-coverage share.
inline double average_peak_age(const FrameTiming& timing, double t_upd,
                               const SteadyState& s) {
  double t_tx = effective_tx_period(timing, t_upd);
  double t_o = s.pi3 * t_upd;
  double base = timing.t_d + t_tx;
  return base + std::ceil(t_o / t_tx) * t_tx * s.pi3_adj;
}

struct PaoiPoint {
  double t_upd = 0.0;
  double paoi = 0.0;         // valid only when feasible
  bool feasible = false;
  double pi1 = 0.0, pi2 = 0.0, pi3 = 0.0;
  double pi2_adj = 0.0, pi3_adj = 0.0;
  double overhead_ratio = 0.0;  // overhead time / update period
};

struct PaoiCurve {
  std::vector<PaoiPoint> points;
  bool any_feasible = false;
  size_t argmin = 0;         // index of the minimizer (ties toward larger t_upd)
  double t_upd_opt = 0.0;
  double paoi_opt = 0.0;
};

struct PaoiGrid {
  double t_min = 0.5e-4;
  double t_max = 2.5;
  double step = 50e-6;
};

// Evaluates the average-age curve over the period grid. The hitting curves
// are computed once and reused for every grid point.
inline PaoiCurve paoi_curve(const FrameTiming& timing, const MobilitySpec& spec,
                            double r_in, const KernelOptions& opts,
                            const HittingCurves& curves, const PaoiGrid& grid) {
  if (grid.step <= 0) throw std::invalid_argument("grid step must be positive");
  if (grid.t_max < grid.t_min)
    throw std::invalid_argument("grid end must not precede grid start");
  CurveIntegral in_int(curves.p_in);
  CurveIntegral out_int(curves.p_out);
  size_t n = size_t(std::floor((grid.t_max - grid.t_min) / grid.step + 1e-9)) + 1;
  PaoiCurve out;
  out.points.assign(n, PaoiPoint{});
  parallel_for(n, [&](size_t i) {
    double t_upd = grid.t_min + double(i) * grid.step;
    PaoiPoint& p = out.points[i];
    p.t_upd = t_upd;
    p.feasible = period_feasible(timing, t_upd);
    if (!p.feasible) return;
    SteadyState s = steady_state_at(timing, spec, r_in, opts, t_upd, in_int, out_int);
    p.pi1 = s.pi1;
    p.pi2 = s.pi2;
    p.pi3 = s.pi3;
    p.pi2_adj = s.pi2_adj;
    p.pi3_adj = s.pi3_adj;
    p.paoi = average_peak_age(timing, t_upd, s);
    p.overhead_ratio = overhead_time(timing, t_upd) / t_upd;
  });
  bool have = false;
  size_t best = 0;
  for (size_t i = 0; i < n; ++i) {
    const PaoiPoint& p = out.points[i];
    if (!p.feasible) continue;
    if (!have || p.paoi <= out.points[best].paoi) {
      best = i;
      have = true;
    }
  }
  out.any_feasible = have;
  if (have) {
    out.argmin = best;
    out.t_upd_opt = out.points[best].t_upd;
    out.paoi_opt = out.points[best].paoi;
  }
  return out;
}

struct OptimizeResult {
  double t_upd_opt = 0.0;
  double paoi_opt = 0.0;
  double overhead_ratio = 0.0;
  SteadyState steady;
  bool refined = false;
};

// Optional local refinement: golden-section search on the bracket around the
// grid minimizer. The objective is piecewise smooth, so this only polishes
// within the winning grid cell.
inline double golden_refine(const FrameTiming& timing, const MobilitySpec& spec,
                            double r_in, const KernelOptions& opts,
                            const CurveIntegral& in_int,
                            const CurveIntegral& out_int, double lo, double hi,
                            int iters = 60) {
  auto value = [&](double t) {
    SteadyState s = steady_state_at(timing, spec, r_in, opts, t, in_int, out_int);
    return average_peak_age(timing, t, s);
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = value(c), fd = value(d);
  for (int i = 0; i < iters && (b - a) > 1e-9; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = value(d);
    }
  }
  return 0.5 * (a + b);
}

inline OptimizeResult optimize_t_upd(const FrameTiming& timing,
                                     const MobilitySpec& spec, double r_in,
                                     const KernelOptions& opts,
                                     const HittingCurves& curves,
                                     const PaoiGrid& grid, bool refine = false) {
  PaoiCurve curve = paoi_curve(timing, spec, r_in, opts, curves, grid);
  if (!curve.any_feasible)
    throw std::runtime_error("no feasible update period in the search range");
  OptimizeResult res;
  res.t_upd_opt = curve.t_upd_opt;
  res.paoi_opt = curve.paoi_opt;
  const PaoiPoint& p = curve.points[curve.argmin];
  res.overhead_ratio = p.overhead_ratio;
  res.steady = SteadyState{p.pi1, p.pi2, p.pi3, p.pi2_adj, p.pi3_adj};
  if (refine) {
    CurveIntegral in_int(curves.p_in);
    CurveIntegral out_int(curves.p_out);
    double lo = std::max(grid.t_min, curve.t_upd_opt - grid.step);
    double hi = std::min(grid.t_max, curve.t_upd_opt + grid.step);
    while (!period_feasible(timing, lo) && lo < hi) lo += grid.step * 0.1;
    double t_ref = golden_refine(timing, spec, r_in, opts, in_int, out_int, lo, hi);
    SteadyState s = steady_state_at(timing, spec, r_in, opts, t_ref, in_int, out_int);
    double v = average_peak_age(timing, t_ref, s);
    if (v < res.paoi_opt) {
      res.t_upd_opt = t_ref;
      res.paoi_opt = v;
      res.overhead_ratio = overhead_time(timing, t_ref) / t_ref;
      res.steady = s;
      res.refined = true;
    }
  }
  return res;
}

struct SweepRow {
  double r_in = 0.0;
  MobilityVariant variant = MobilityVariant::ConstantSpeed;
  double t_upd_opt = 0.0;
  double paoi_opt = 0.0;
  double overhead_ratio = 0.0;
  double straight_exit_time = 0.0;  // center-to-boundary time on a radial line
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> cell_errors;  // one entry per failed (variant, r) cell
};

// Re-derives the optimum for each illuminated radius and mobility variant;
// the straight_exit_time column is the radial center-to-boundary travel time
// used as a reference scale for the optimal period. A failing cell is
// recorded and the sweep continues.
inline SweepResult sweep_radius(const ScenarioConfig& cfg,
                                const FrameTiming& timing,
                                const std::vector<double>& radii,
                                const std::vector<MobilityVariant>& variants,
                                const PaoiGrid& grid) {
  SweepResult out;
  for (MobilityVariant variant : variants) {
    MobilitySpec spec = cfg.mobility;
    spec.variant = variant;
    for (double r : radii) {
      try {
        if (!(r > 0) || r >= cfg.geometry.r_out)
          throw std::invalid_argument("swept radius must lie in (0, r_out)");
        Geometry geom = cfg.geometry;
        geom.r_in = r;
        HittingCurves curves =
            hitting_curves(spec, geom, cfg.numerics, cfg.kernel.legs);
        OptimizeResult res =
            optimize_t_upd(timing, spec, r, cfg.kernel, curves, grid);
        SweepRow row;
        row.r_in = r;
        row.variant = variant;
        row.t_upd_opt = res.t_upd_opt;
        row.paoi_opt = res.paoi_opt;
        row.overhead_ratio = res.overhead_ratio;
        row.straight_exit_time = r / spec.max_speed();
        out.rows.push_back(row);
      } catch (const std::exception& e) {
        out.cell_errors.push_back("cell variant=" + to_string(variant) +
                                  " r_in=" + std::to_string(r) + ": " + e.what());
      }
    }
  }
  return out;
}

}  // namespace irspaoi
