#pragma once

#include <cmath>

namespace isrsgn {

namespace phys {
inline constexpr double c_light = 299792458.0;      // m/s
inline constexpr double h_planck = 6.62607015e-34;  // J·s
}  // namespace phys

namespace units {

inline constexpr double thz = 1e12;
inline constexpr double ghz = 1e9;
inline constexpr double km = 1e3;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watt(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watt_to_dbm(double w) { return linear_to_db(w * 1e3); }

// Power attenuation: e^{-alpha z}. 0.2 dB/km -> 4.605e-5 1/m.
inline double atten_db_per_km_to_per_m(double db_per_km) {
  return db_per_km * std::log(10.0) / 10.0 / km;
}
inline double atten_per_m_to_db_per_km(double per_m) {
  return per_m * 10.0 / std::log(10.0) * km;
}

// 1/(W·km·THz) -> 1/(W·m·Hz)
inline double raman_slope_to_si(double per_w_km_thz) { return per_w_km_thz / km / thz; }
// 1/(W·km) -> 1/(W·m)
inline double raman_gain_to_si(double per_w_km) { return per_w_km / km; }
// 1/(W·km) -> 1/(W·m)
inline double gamma_to_si(double per_w_km) { return per_w_km / km; }

}  // namespace units
}  // namespace isrsgn
