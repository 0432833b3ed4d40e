#pragma once

#include <cmath>

namespace irspaoi {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s
inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace irspaoi
