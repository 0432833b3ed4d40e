#pragma once

// Random-waypoint Monte Carlo engine: exact leg-circle crossing detection for
// first-exit/first-entry distributions and direct simulation of the
// regenerative reconfiguration cycle for occupation fractions. Randomness is
// derived per trial from (seed, trial index) so results are identical at any
// worker count, and uniform deviates are generated from raw 64-bit draws so
// replay is bit-exact across standard library implementations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "irspaoi/constants.hpp"
#include "irspaoi/parallel.hpp"
#include "irspaoi/scenario.hpp"

namespace irspaoi {

// splitmix64: well-mixed 64-bit stream, used both to whiten per-trial seeds
// and as the per-trial generator.
class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : state_(seed) {
    next_u64();  // discard the correlated first increment
  }
  static TrialRng for_trial(std::uint64_t seed, std::uint64_t trial) {
    return TrialRng(seed + 0x9E3779B97F4A7C15ULL * (trial + 1));
  }
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double exponential(double mean) {
    double u;
    do { u = uniform(); } while (u <= 0.0);
    return -mean * std::log(u);
  }

 private:
  std::uint64_t state_;
};

// Uniform point in the disc of radius r (sqrt-radius polar transform).
inline Vec2 sample_waypoint(double r, TrialRng& rng) {
  if (r <= 0) throw std::invalid_argument("disc radius must be positive");
  double rad = r * std::sqrt(rng.uniform());
  double th = 2.0 * kPi * rng.uniform();
  return {rad * std::cos(th), rad * std::sin(th)};
}

struct EmpiricalCdf {
  std::vector<double> times;      // sorted crossing times, s
  long trials = 0;
  long censored = 0;              // trials that hit the leg-count safety cap

  // Fraction of samples <= t.
  double at(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    return trials > 0 ? double(it - times.begin()) / double(trials) : 0.0;
  }
};

enum class StartMode { Center, UniformInner, UniformAnnulus };

namespace detail {

inline double leg_speed(const MobilitySpec& spec, TrialRng& rng) {
  return spec.variant == MobilityVariant::RandomSpeed
             ? rng.uniform(spec.v_min, spec.v_max)
             : spec.v;
}

// First s in [0,1] along pos -> pos+d at which |pos + s d| = r, crossing
// outward (inside start) or inward (outside start); negative if none.
inline double crossing_fraction(const Vec2& pos, const Vec2& d, double r,
                                bool outward) {
  double l2 = d[0] * d[0] + d[1] * d[1];
  if (l2 <= 0) return -1.0;
  double b = pos[0] * d[0] + pos[1] * d[1];
  double c0 = pos[0] * pos[0] + pos[1] * pos[1] - r * r;
  double disc = b * b - l2 * c0;
  if (disc < 0) return -1.0;
  double sq = std::sqrt(disc);
  double s = outward ? (-b + sq) / l2 : (-b - sq) / l2;
  return (s >= 0.0 && s <= 1.0) ? s : -1.0;
}

inline Vec2 start_position(StartMode mode, double r_in, double r_out,
                           TrialRng& rng) {
  switch (mode) {
    case StartMode::Center:
      return {0.0, 0.0};
    case StartMode::UniformInner:
      return sample_waypoint(r_in, rng);
    case StartMode::UniformAnnulus: {
      while (true) {
        Vec2 p = sample_waypoint(r_out, rng);
        if (p[0] * p[0] + p[1] * p[1] > r_in * r_in) return p;
      }
    }
  }
  return {0.0, 0.0};
}

}  // namespace detail

inline constexpr long kLegSafetyCap = 10000;

// One trial of the first boundary-crossing time of the radius-r_boundary
// circle; pauses (WithPause) occur before each move and count toward the
// elapsed time. Returns a negative value when the safety cap is reached.
inline double first_crossing_trial(const MobilitySpec& spec, double r_boundary,
                                   double r_out, Vec2 pos, bool outward,
                                   TrialRng& rng) {
  double t = 0.0;
  for (long leg = 0; leg < kLegSafetyCap; ++leg) {
    if (spec.variant == MobilityVariant::WithPause)
      t += rng.exponential(spec.pause_mean);
    Vec2 wp = sample_waypoint(r_out, rng);
    Vec2 d{wp[0] - pos[0], wp[1] - pos[1]};
    double v = detail::leg_speed(spec, rng);
    double s = detail::crossing_fraction(pos, d, r_boundary, outward);
    double len = std::sqrt(d[0] * d[0] + d[1] * d[1]);
    if (s >= 0.0) return t + s * len / v;
    t += len / v;
    pos = wp;
  }
  return -1.0;
}

inline EmpiricalCdf first_exit_time_mc(const MobilitySpec& spec, double r_in,
                                       double r_out, StartMode start,
                                       long trials, std::uint64_t seed) {
  if (!(r_in < r_out)) throw std::invalid_argument("r_in must be < r_out");
  if (trials < 100) throw std::invalid_argument("need at least 100 trials");
  if (start == StartMode::UniformAnnulus)
    throw std::invalid_argument("exit trials must start inside");
  std::vector<double> raw(size_t(trials), -1.0);
  parallel_for(size_t(trials), [&](size_t k) {
    TrialRng rng = TrialRng::for_trial(seed, k);
    Vec2 pos = detail::start_position(start, r_in, r_out, rng);
    raw[k] = first_crossing_trial(spec, r_in, r_out, pos, true, rng);
  });
  EmpiricalCdf out;
  out.trials = trials;
  for (double t : raw)
    (t >= 0.0 ? out.times.push_back(t) : void(++out.censored));
  std::sort(out.times.begin(), out.times.end());
  return out;
}

inline EmpiricalCdf first_entry_time_mc(const MobilitySpec& spec, double r_in,
                                        double r_out, long trials,
                                        std::uint64_t seed) {
  if (!(r_in < r_out)) throw std::invalid_argument("r_in must be < r_out");
  if (trials < 100) throw std::invalid_argument("need at least 100 trials");
  std::vector<double> raw(size_t(trials), -1.0);
  parallel_for(size_t(trials), [&](size_t k) {
    TrialRng rng = TrialRng::for_trial(seed, k);
    Vec2 pos =
        detail::start_position(StartMode::UniformAnnulus, r_in, r_out, rng);
    raw[k] = first_crossing_trial(spec, r_in, r_out, pos, false, rng);
  });
  EmpiricalCdf out;
  out.trials = trials;
  for (double t : raw)
    (t >= 0.0 ? out.times.push_back(t) : void(++out.censored));
  std::sort(out.times.begin(), out.times.end());
  return out;
}

struct OccupationFractions {
  double pi1 = 0.0, pi2 = 0.0, pi3 = 0.0;
};

// Direct simulation of the reconfiguration cycle: one continuous trajectory;
// every t_upd the illuminated disc recenters on the MU; the first t_conf of
// each cycle counts as the reconfiguring state, the rest splits by whether
// the MU is within r_in of the cycle's center. State is sampled at dt.
inline OccupationFractions occupation_fractions_mc(
    const MobilitySpec& spec, const Geometry& geom, double t_conf,
    double t_upd, double horizon, std::uint64_t seed, double dt = 1e-3) {
  if (t_upd <= 0) throw std::invalid_argument("update period must be positive");
  if (t_upd <= t_conf) return {1.0, 0.0, 0.0};

  TrialRng rng(seed);
  Vec2 pos{0.0, 0.0};
  Vec2 center = pos;
  double pause_left =
      spec.variant == MobilityVariant::WithPause ? rng.exponential(spec.pause_mean) : 0.0;
  Vec2 wp = sample_waypoint(geom.r_out, rng);
  double v = detail::leg_speed(spec, rng);

  long counts[3] = {0, 0, 0};
  long steps = long(std::floor(horizon / dt));
  double cycle_phase = 0.0;
  for (long i = 0; i < steps; ++i) {
    // advance the trajectory by dt
    double remain = dt;
    while (remain > 0.0) {
      if (pause_left > 0.0) {
        double take = std::min(pause_left, remain);
        pause_left -= take;
        remain -= take;
        continue;
      }
      double dx = wp[0] - pos[0], dy = wp[1] - pos[1];
      double dist = std::sqrt(dx * dx + dy * dy);
      double need = dist / v;
      if (need <= remain) {
        pos = wp;
        remain -= need;
        if (spec.variant == MobilityVariant::WithPause)
          pause_left = rng.exponential(spec.pause_mean);
        wp = sample_waypoint(geom.r_out, rng);
        v = detail::leg_speed(spec, rng);
      } else {
        double f = remain / need;
        pos = {pos[0] + f * dx, pos[1] + f * dy};
        remain = 0.0;
      }
    }
    cycle_phase += dt;
    if (cycle_phase >= t_upd - 0.5 * dt) {
      cycle_phase = 0.0;
      center = pos;
    }
    if (cycle_phase < t_conf) {
      ++counts[0];
    } else {
      double ddx = pos[0] - center[0], ddy = pos[1] - center[1];
      bool inside = ddx * ddx + ddy * ddy <= geom.r_in * geom.r_in;
      ++counts[inside ? 1 : 2];
    }
  }
  double total = double(counts[0] + counts[1] + counts[2]);
  return {counts[0] / total, counts[1] / total, counts[2] / total};
}

}  // namespace irspaoi
