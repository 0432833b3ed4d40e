#pragma once

// Uniform-time-grid probability machinery: sampled densities (with optional
// atom at zero and recorded tail mass), sampled monotone curves, trapezoidal
// integration, and FFT-based convolution (FFTW, zero-padded to kill wraparound
// within the weighted-tail budget).

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace irspaoi {

struct SampledDensity {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;     // density, units 1/s
  double atom_at_zero = 0.0;      // degenerate mass at t = 0
  double tail_mass = 0.0;         // mass truncated beyond the grid horizon
  double renorm_drift = 0.0;      // |1 - integral| absorbed by normalization

  double integral() const;
};

struct SampledCurve {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;     // probabilities

  // Linear interpolation, clamped to the end values outside the grid.
  double at(double t) const {
    if (values.empty()) return 0.0;
    double x = (t - t0) / dt;
    if (x <= 0.0) return values.front();
    if (x >= double(values.size() - 1)) return values.back();
    size_t i = size_t(x);
    double f = x - double(i);
    return values[i] * (1.0 - f) + values[i + 1] * f;
  }
};

inline double trapezoid(const std::vector<double>& v, double dt) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * dt;
}

inline double SampledDensity::integral() const { return trapezoid(values, dt); }

// Cumulative trapezoidal integral; same grid, starts at 0.
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& v,
                                                double dt) {
  std::vector<double> out(v.size(), 0.0);
  for (size_t i = 1; i < v.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (v[i - 1] + v[i]) * dt;
  return out;
}

// Normalizes a density to unit trapezoidal integral, recording the drift.
inline void normalize_density(SampledDensity& d) {
  double m = d.integral() + d.atom_at_zero;
  if (m <= 0) throw std::runtime_error("density has nonpositive mass");
  d.renorm_drift = std::abs(1.0 - m);
  for (double& x : d.values) x /= m;
  d.atom_at_zero /= m;
}

// Real-to-complex FFT pair on a fixed padded length. FFTW plan creation is
// not thread-safe; guarded by a global mutex. Execution is re-entrant.
class FftConvolver {
 public:
  explicit FftConvolver(size_t n_grid) {
    n_ = n_grid;
    n_fft_ = 1;
    while (n_fft_ < 2 * n_grid) n_fft_ <<= 1;
    real_.assign(n_fft_, 0.0);
    spec_.assign(n_fft_ / 2 + 1, {0.0, 0.0});
    std::lock_guard<std::mutex> lock(plan_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(int(n_fft_), real_.data(),
                                reinterpret_cast<fftw_complex*>(spec_.data()),
                                FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(int(n_fft_),
                                reinterpret_cast<fftw_complex*>(spec_.data()),
                                real_.data(), FFTW_ESTIMATE);
  }
  ~FftConvolver() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  FftConvolver(const FftConvolver&) = delete;
  FftConvolver& operator=(const FftConvolver&) = delete;

  size_t padded_size() const { return n_fft_; }

  std::vector<std::complex<double>> forward(const std::vector<double>& x) {
    std::fill(real_.begin(), real_.end(), 0.0);
    std::copy(x.begin(), x.end(), real_.begin());
    fftw_execute(fwd_);
    return spec_;
  }

  // Inverse transform of a spectrum, truncated to the first n_out samples
  // and scaled by 1/n_fft (FFTW transforms are unnormalized).
  std::vector<double> inverse(const std::vector<std::complex<double>>& s,
                              size_t n_out) {
    std::copy(s.begin(), s.end(), spec_.begin());
    fftw_execute(bwd_);
    std::vector<double> out(n_out);
    double scale = 1.0 / double(n_fft_);
    for (size_t i = 0; i < n_out; ++i) out[i] = real_[i] * scale;
    return out;
  }

 private:
  static std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
  }
  size_t n_ = 0, n_fft_ = 0;
  std::vector<double> real_;
  std::vector<std::complex<double>> spec_;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

// Discrete linear convolution of two densities on a shared grid (dt scaling),
// truncated to n_out samples.
inline std::vector<double> convolve_densities(const std::vector<double>& a,
                                              const std::vector<double>& b,
                                              double dt, size_t n_out) {
  FftConvolver fft(std::max(a.size(), std::max(b.size(), n_out)));
  auto fa = fft.forward(a);
  auto fb = fft.forward(b);
  for (size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i] * dt;
  auto out = fft.inverse(fa, n_out);
  for (double& x : out) x = std::max(0.0, x);
  return out;
}

}  // namespace irspaoi
