#pragma once

// Analytic first-hitting machinery: jump-length density on a disc, per-variant
// jump-time densities, n-fold convolutions, geometric first-hit weights, and
// the boundary-crossing probability curves assembled by total probability.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "irspaoi/constants.hpp"
#include "irspaoi/sampled.hpp"
#include "irspaoi/scenario.hpp"

namespace irspaoi {

// Distance density between two independent uniform points in a disc of
// radius r; support [0, 2r].
inline double jump_length_pdf(double l, double r) {
  if (l <= 0.0 || l >= 2.0 * r) return 0.0;
  double x = l / (2.0 * r);
  return (8.0 / (kPi * r)) * x *
         (std::acos(x) - x * std::sqrt(std::max(0.0, 1.0 - x * x)));
}

inline SampledDensity jump_length_density(double r, double dt, size_t n) {
  if (r <= 0) throw std::invalid_argument("disc radius must be positive");
  if (dt > 2.0 * r / 100.0)
    throw std::invalid_argument("grid too coarse for the jump-length support");
  SampledDensity d;
  d.dt = dt;
  d.values.resize(n);
  for (size_t i = 0; i < n; ++i) d.values[i] = jump_length_pdf(double(i) * dt, r);
  normalize_density(d);
  return d;
}

// Travel-time density of one leg for the given mobility variant.
//  ConstantSpeed: v * f_L(v t); WithPause: that convolved with an exponential
//  pause; RandomSpeed: speed mixture over a uniform [v_min, v_max] draw.
inline SampledDensity jump_time_density(const MobilitySpec& spec, double r,
                                        double dt, size_t n) {
  if (r <= 0) throw std::invalid_argument("disc radius must be positive");
  SampledDensity d;
  d.dt = dt;
  d.values.assign(n, 0.0);
  switch (spec.variant) {
    case MobilityVariant::ConstantSpeed: {
      for (size_t i = 0; i < n; ++i)
        d.values[i] = spec.v * jump_length_pdf(spec.v * double(i) * dt, r);
      break;
    }
    case MobilityVariant::WithPause: {
      std::vector<double> base(n), pause(n);
      for (size_t i = 0; i < n; ++i) {
        double t = double(i) * dt;
        base[i] = spec.v * jump_length_pdf(spec.v * t, r);
        pause[i] = std::exp(-t / spec.pause_mean) / spec.pause_mean;
      }
      d.values = convolve_densities(base, pause, dt, n);
      break;
    }
    case MobilityVariant::RandomSpeed: {
      // Simpson rule over the speed support (odd node count).
      const size_t kNodes = 401;
      double h = (spec.v_max - spec.v_min) / double(kNodes - 1);
      double f_v = 1.0 / (spec.v_max - spec.v_min);
      for (size_t k = 0; k < kNodes; ++k) {
        double v = spec.v_min + double(k) * h;
        double wgt = (k == 0 || k == kNodes - 1) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        double scale = wgt * (h / 3.0) * f_v * v;
        for (size_t i = 0; i < n; ++i)
          d.values[i] += scale * jump_length_pdf(v * double(i) * dt, r);
      }
      break;
    }
  }
  normalize_density(d);
  return d;
}

// j-fold self-convolution; the grid is extended toward j x support but
// truncated at n_max samples, with the lost mass recorded.
inline SampledDensity nfold_convolution(const SampledDensity& d, int j,
                                        size_t n_max) {
  if (j < 1) throw std::invalid_argument("fold count must be >= 1");
  if (j == 1) return d;
  size_t support = d.values.size();
  while (support > 1 && d.values[support - 1] == 0.0) --support;
  size_t n_out = std::min(n_max, size_t(j) * support);
  SampledDensity out;
  out.t0 = d.t0;
  out.dt = d.dt;
  FftConvolver fft(std::max(n_out, d.values.size()));
  auto base = fft.forward(d.values);
  auto acc = base;
  for (int k = 1; k < j; ++k)
    for (size_t i = 0; i < acc.size(); ++i) acc[i] *= base[i] * d.dt;
  out.values = fft.inverse(acc, n_out);
  for (double& x : out.values) x = std::max(0.0, x);
  double mass = out.integral();
  out.tail_mass = std::max(0.0, 1.0 - mass);
  if (mass > 0 && std::abs(1.0 - mass) <= 1e-3) {
    out.renorm_drift = std::abs(1.0 - mass);
    for (double& x : out.values) x /= mass;
    out.tail_mass = 0.0;
  }
  return out;
}

// Probability that the first region-leaving waypoint is the (j+1)-th drawn:
// geometric with per-jump survival p.
inline double first_hit_jump_pmf(double p, int j) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("survival probability must lie in (0,1)");
  if (j < 0) throw std::invalid_argument("jump index must be >= 0");
  return std::pow(p, j) * (1.0 - p);
}

struct FirstPassageResult {
  SampledCurve cdf;
  int terms = 0;                  // highest jump count summed
  double tail_bound = 0.0;        // residual geometric mass beyond terms
};

// Total-probability assembly of the first boundary-crossing CDF from the
// per-leg time density and the per-jump survival probability.
//  include-last: the crossing leg is counted in full ((j+1)-fold convolution).
//  exclude-last: only pre-crossing legs count; adds a (1-p) atom at t = 0.
inline FirstPassageResult first_passage_cdf(const SampledDensity& leg,
                                            double survival, double trunc_eps,
                                            LegConvention legs, size_t n) {
  if (!(survival > 0.0 && survival < 1.0))
    throw std::invalid_argument("survival probability must lie in (0,1)");
  FirstPassageResult res;
  res.cdf.dt = leg.dt;
  res.cdf.values.assign(n, 0.0);
  const bool include_last = legs == LegConvention::IncludeLast;
  if (!include_last)
    for (double& v : res.cdf.values) v += (1.0 - survival);

  FftConvolver fft(n);
  auto base = fft.forward(leg.values);
  std::vector<std::complex<double>> acc(base.size(), {1.0, 0.0});
  int j = 0;
  double tail = 1.0;
  while (true) {
    for (size_t i = 0; i < acc.size(); ++i)
      acc[i] *= base[i] * ((j == 0) ? 1.0 : leg.dt);
    auto conv = fft.inverse(acc, n);       // (j+1)-fold leg-time density
    for (double& x : conv) x = std::max(0.0, x);
    auto cum = cumulative_trapezoid(conv, leg.dt);
    double w = include_last ? first_hit_jump_pmf(survival, j)
                            : std::pow(survival, j + 1) * (1.0 - survival);
    for (size_t i = 0; i < n; ++i)
      res.cdf.values[i] += w * std::min(1.0, cum[i]);
    ++j;
    tail = include_last ? std::pow(survival, j) : std::pow(survival, j + 1);
    if (tail < trunc_eps || j > 2000) break;
  }
  res.terms = j;
  res.tail_bound = tail;
  for (double& v : res.cdf.values) v = std::min(1.0, v);
  return res;
}

struct HittingCurves {
  SampledCurve p_in;              // stays-inside probability from a uniform start
  SampledCurve p_out;             // stays-outside probability from an annulus start
  FirstPassageResult exit_fp;
  FirstPassageResult entry_fp;
};

// Stays-inside curve: complement of the first-exit CDF with inner-disc legs
// and survival p = (r_in/r_out)^2.
inline SampledCurve p_in_curve(const MobilitySpec& spec, double r_in, double p,
                               const NumericsParams& num, LegConvention legs,
                               FirstPassageResult* fp_out = nullptr) {
  size_t n = size_t(std::floor(num.t_max / num.dt)) + 1;
  SampledDensity leg = jump_time_density(spec, r_in, num.dt, n);
  FirstPassageResult fp =
      first_passage_cdf(leg, p, num.trunc_eps, legs, n);
  SampledCurve out;
  out.dt = fp.cdf.dt;
  out.values.resize(fp.cdf.values.size());
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = 1.0 - fp.cdf.values[i];
  if (fp_out) *fp_out = fp;
  return out;
}

// Stays-outside curve: complement of the first-entry CDF with whole-disc legs
// and survival p_complement = 1 - (r_in/r_out)^2.
inline SampledCurve p_out_curve(const MobilitySpec& spec, double r_out,
                                double p_complement, const NumericsParams& num,
                                LegConvention legs,
                                FirstPassageResult* fp_out = nullptr) {
  size_t n = size_t(std::floor(num.t_max / num.dt)) + 1;
  SampledDensity leg = jump_time_density(spec, r_out, num.dt, n);
  FirstPassageResult fp =
      first_passage_cdf(leg, p_complement, num.trunc_eps, legs, n);
  SampledCurve out;
  out.dt = fp.cdf.dt;
  out.values.resize(fp.cdf.values.size());
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = 1.0 - fp.cdf.values[i];
  if (fp_out) *fp_out = fp;
  return out;
}

inline HittingCurves hitting_curves(const MobilitySpec& spec,
                                    const Geometry& geom,
                                    const NumericsParams& num,
                                    LegConvention legs) {
  double p = area_ratio(geom);
  HittingCurves h;
  h.p_in = p_in_curve(spec, geom.r_in, p, num, legs, &h.exit_fp);
  h.p_out = p_out_curve(spec, geom.r_out, 1.0 - p, num, legs, &h.entry_fp);
  return h;
}

}  // namespace irspaoi
