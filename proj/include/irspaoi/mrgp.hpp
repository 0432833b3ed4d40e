#pragma once

// Markov-regenerative steady state: global step kernel at the update period,
// three-state local kernel assembled from the stays-inside/outside curves and
// frame timing, cycle-occupation integrals (piecewise-exact, with curve tails
// integrated by cumulative trapezoid), and the adjusted two-state split.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "irspaoi/frame_timing.hpp"
#include "irspaoi/sampled.hpp"
#include "irspaoi/scenario.hpp"

namespace irspaoi {

// Regeneration indicator: the process is re-evaluated exactly every t_upd.
inline double global_kernel(double t, double t_upd) {
  if (t < 0) throw std::invalid_argument("time must be nonnegative");
  if (t_upd <= 0) throw std::invalid_argument("update period must be positive");
  return t >= t_upd ? 1.0 : 0.0;
}

// Cumulative trapezoidal integral of a curve, evaluable at fractional upper
// limits; beyond the grid the integrand is extended with its final value.
class CurveIntegral {
 public:
  CurveIntegral() = default;
  explicit CurveIntegral(const SampledCurve& c)
      : dt_(c.dt),
        cum_(cumulative_trapezoid(c.values, c.dt)),
        last_value_(c.values.empty() ? 0.0 : c.values.back()) {}

  // integral of the curve over [0, x]
  double at(double x) const {
    if (x <= 0.0 || cum_.empty()) return 0.0;
    double idx = x / dt_;
    double max_idx = double(cum_.size() - 1);
    if (idx >= max_idx)
      return cum_.back() + (x - max_idx * dt_) * last_value_;
    size_t i = size_t(idx);
    double f = idx - double(i);
    return cum_[i] * (1.0 - f) + cum_[i + 1] * f;
  }

 private:
  double dt_ = 0.0;
  std::vector<double> cum_;
  double last_value_ = 0.0;
};

struct KernelGeometry {
  double t_conf = 0.0;
  double t_break = 0.0;           // minimum center->boundary travel time
  double t0_shift = 0.0;          // time shift applied to the inside curve
};

inline KernelGeometry kernel_geometry(const FrameTiming& timing,
                                      const MobilitySpec& spec, double r_in,
                                      KernelShift shift) {
  KernelGeometry kg;
  kg.t_conf = timing.t_conf();
  kg.t_break = r_in / spec.max_speed();
  kg.t0_shift = shift == KernelShift::Literal ? kg.t_conf - kg.t_break
                                              : kg.t_conf + kg.t_break;
  return kg;
}

struct LocalKernel {
  double t_upd = 0.0;
  double t_conf = 0.0;
  double t0_shift = 0.0;
  double t_break = 0.0;
  KernelMode mode = KernelMode::Complement;
  SampledCurve e11, e12, e13;     // sampled on [0, t_upd]
  const SampledCurve* p_in = nullptr;   // shift-free source curves
  const SampledCurve* p_out = nullptr;
};

// Pointwise state-transition curves over one cycle:
//  e11: still reconfiguring; e12: never left the illuminated disc
//  (guaranteed until the minimum boundary travel time, then the shifted
//  stays-inside curve); e13: complement (default) or the shifted
//  stays-outside curve taken literally.
inline LocalKernel build_local_kernel(const FrameTiming& timing, double t_upd,
                                      const SampledCurve& p_in,
                                      const SampledCurve& p_out,
                                      const MobilitySpec& spec, double r_in,
                                      const KernelOptions& opts, double dt) {
  if (t_upd <= 0) throw std::invalid_argument("update period must be positive");
  KernelGeometry kg = kernel_geometry(timing, spec, r_in, opts.shift);
  LocalKernel k;
  k.t_upd = t_upd;
  k.t_conf = kg.t_conf;
  k.t_break = kg.t_break;
  k.t0_shift = kg.t0_shift;
  k.mode = opts.mode;
  k.p_in = &p_in;
  k.p_out = &p_out;
  size_t n = size_t(std::floor(t_upd / dt)) + 1;
  for (SampledCurve* c : {&k.e11, &k.e12, &k.e13}) {
    c->dt = dt;
    c->values.assign(n, 0.0);
  }
  double guard_hi = std::max(kg.t_conf, kg.t_break);
  for (size_t i = 0; i < n; ++i) {
    double t = double(i) * dt;
    double e11 = t < kg.t_conf ? 1.0 : 0.0;
    double e12 = 0.0;
    if (t >= kg.t_conf) {
      if (t <= guard_hi)
        e12 = 1.0;
      else
        e12 = p_in.at(std::max(0.0, t - kg.t0_shift));
    }
    double e13;
    if (opts.mode == KernelMode::Complement) {
      e13 = std::max(0.0, 1.0 - e11 - e12);
    } else {
      e13 = t >= kg.t_conf ? p_out.at(t - kg.t_conf) : 0.0;
    }
    k.e11.values[i] = e11;
    k.e12.values[i] = e12;
    k.e13.values[i] = e13;
  }
  return k;
}

// Expected time per cycle in each state. The reconfiguration share is exact;
// the guaranteed-inside rectangle is exact; curve tails use the cumulative
// trapezoid of the source curves, so the complement-mode partition
// a1 + a2 + a3 = t_upd holds identically.
inline std::array<double, 3> alphas_from_curves(const KernelGeometry& kg,
                                                double t_upd, KernelMode mode,
                                                const CurveIntegral& in_int,
                                                const CurveIntegral& out_int) {
  double a11 = std::min(kg.t_conf, t_upd);
  double m = std::max(kg.t_conf, kg.t_break);
  double a12 = std::max(0.0, std::min(t_upd, m) - kg.t_conf);
  if (t_upd > m) {
    double clamp_hi = std::min(t_upd, std::max(m, kg.t0_shift));
    a12 += std::max(0.0, clamp_hi - m);
    double from = std::max(m, kg.t0_shift);
    if (t_upd > from)
      a12 += in_int.at(t_upd - kg.t0_shift) - in_int.at(from - kg.t0_shift);
  }
  double a13;
  if (mode == KernelMode::Complement) {
    a13 = std::max(0.0, t_upd - a11 - a12);
  } else {
    a13 = t_upd > kg.t_conf ? out_int.at(t_upd - kg.t_conf) : 0.0;
  }
  return {a11, a12, a13};
}

inline std::array<double, 3> alpha_integrals(const LocalKernel& k) {
  if (!k.p_in || !k.p_out)
    throw std::invalid_argument("kernel is missing its source curves");
  KernelGeometry kg{k.t_conf, k.t_break, k.t0_shift};
  return alphas_from_curves(kg, k.t_upd, k.mode, CurveIntegral(*k.p_in),
                            CurveIntegral(*k.p_out));
}

struct SteadyState {
  double pi1 = 0.0, pi2 = 0.0, pi3 = 0.0;
  double pi2_adj = 0.0, pi3_adj = 0.0;
};

inline SteadyState steady_state(const std::array<double, 3>& alphas) {
  double sum = alphas[0] + alphas[1] + alphas[2];
  if (!(sum > 0)) throw std::invalid_argument("cycle integrals are all zero");
  SteadyState s;
  s.pi1 = alphas[0] / sum;
  s.pi2 = alphas[1] / sum;
  s.pi3 = alphas[2] / sum;
  return s;
}

// Folds the reconfiguration share into the in/out split: the out-share gains
// the whole non-in fraction of pi1, keeping pi2_adj + pi3_adj = 1 exactly.
inline SteadyState adjusted_probabilities(SteadyState s) {
  s.pi2_adj = s.pi2 + s.pi2 * s.pi1;
  s.pi3_adj = s.pi3 + (1.0 - s.pi2) * s.pi1;
  return s;
}

inline SteadyState steady_state_at(const FrameTiming& timing,
                                   const MobilitySpec& spec, double r_in,
                                   const KernelOptions& opts, double t_upd,
                                   const CurveIntegral& in_int,
                                   const CurveIntegral& out_int) {
  KernelGeometry kg = kernel_geometry(timing, spec, r_in, opts.shift);
  auto a = alphas_from_curves(kg, t_upd, opts.mode, in_int, out_int);
  return adjusted_probabilities(steady_state(a));
}

}  // namespace irspaoi
