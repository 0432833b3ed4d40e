#pragma once

// Frame/overhead algebra: deterministic time constants derived from sample
// counts plus the per-update-period quantities (packet count, overhead time,
// effective transmission period).

#include <cmath>
#include <stdexcept>
#include <string>

#include "irspaoi/constants.hpp"
#include "irspaoi/scenario.hpp"

namespace irspaoi {

struct FrameTiming {
  double t_loc = 0.0;     // localization budget, s
  double t_irs = 0.0;     // coefficient-reconfiguration packet, s
  double t_p_ovh = 0.0;   // per-packet preamble+training overhead, s
  double t_data = 0.0;    // data payload duration, s
  double t_idle = 0.0;    // inter-packet idle, s
  double t_d = 0.0;       // propagation delay over the reflected path, s

  double t_conf() const { return t_loc + t_irs; }
};

class InfeasiblePeriod : public std::runtime_error {
 public:
  InfeasiblePeriod(double t_upd, double t_ovh)
      : std::runtime_error("update period " + std::to_string(t_upd) +
                           " s is infeasible: overhead " +
                           std::to_string(t_ovh) + " s meets or exceeds it") {}
};

inline FrameTiming derive_timing(const FrameInputs& f, const IrsPanel& panel,
                                 const Geometry& geom) {
  if (f.f_s <= 0) throw std::invalid_argument("sample rate must be positive");
  FrameTiming t;
  t.t_data = f.data_samples / f.f_s;
  t.t_p_ovh = f.t_p_ovh_override > 0
                  ? f.t_p_ovh_override
                  : (f.preamble_samples + f.training_samples) / f.f_s;
  double coeff_bits = double(panel.n_x) * double(panel.n_y) * f.irs_coeff_bits;
  double coeff_samples = std::ceil(coeff_bits * f.samples_per_bit);
  t.t_irs = (f.preamble_samples + coeff_samples + f.training_samples) / f.f_s;
  double loc_payload_samples = std::ceil(8.0 * f.samples_per_bit);
  double t_ppdu_loc =
      (f.preamble_samples + loc_payload_samples + f.training_samples) / f.f_s;
  t.t_loc = f.loc_tx_per_block * f.loc_blocks * t_ppdu_loc +
            f.loc_blocks * t.t_irs;
  t.t_idle = f.t_idle;
  Vec3 mu_center{geom.illum_center[0], geom.illum_center[1],
                 geom.mu_plane_height};
  t.t_d = (norm(geom.p_ap, geom.p_irs) + norm(geom.p_irs, mu_center)) /
          kSpeedOfLight;
  return t;
}

// Number of packets emitted during one update period.
inline long packets_per_update(const FrameTiming& t, double t_upd) {
  if (t_upd <= 0) throw std::invalid_argument("update period must be positive");
  double window = t_upd - t.t_conf();
  if (window <= 0) return 0;
  return long(std::ceil(window / (t.t_p_ovh + t.t_data + t.t_idle)));
}

inline double overhead_time(const FrameTiming& t, double t_upd) {
  long c_h = packets_per_update(t, t_upd);
  return t.t_conf() + double(c_h) * (t.t_p_ovh + t.t_idle);
}

inline bool period_feasible(const FrameTiming& t, double t_upd) {
  return t_upd > 0 && overhead_time(t, t_upd) < t_upd;
}

// Equivalent per-packet transmission period once overhead is amortized.
inline double effective_tx_period(const FrameTiming& t, double t_upd) {
  double t_ovh = overhead_time(t, t_upd);
  if (t_ovh >= t_upd) throw InfeasiblePeriod(t_upd, t_ovh);
  return t.t_data + t.t_data * t_ovh / (t_upd - t_ovh);
}

}  // namespace irspaoi
