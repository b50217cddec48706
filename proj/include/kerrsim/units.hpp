#pragma once

#include <cmath>

#include "kerrsim/constants.hpp"

// All internal frequencies and rates are angular (rad/s).  Ordinary
// frequencies (GHz, MHz, ...) appear only at the I/O boundary; these helpers
// are that boundary.

namespace kerrsim::units {

inline constexpr double two_pi = 6.283185307179586476925287;

inline double ghz_to_rad(double f) { return two_pi * 1e9 * f; }
inline double mhz_to_rad(double f) { return two_pi * 1e6 * f; }
inline double khz_to_rad(double f) { return two_pi * 1e3 * f; }
inline double rad_to_ghz(double w) { return w / (two_pi * 1e9); }
inline double rad_to_mhz(double w) { return w / (two_pi * 1e6); }
inline double rad_to_khz(double w) { return w / (two_pi * 1e3); }

inline double ns(double t) { return 1e-9 * t; }
inline double us(double t) { return 1e-6 * t; }
inline double s_to_ns(double t) { return 1e9 * t; }
inline double mk_to_k(double t) { return 1e-3 * t; }

inline double dbm_to_watt(double p_dbm) { return std::pow(10.0, (p_dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double p_w) { return 10.0 * std::log10(p_w) + 30.0; }

/// Drive amplitude (rad/s) reaching the resonator from a generator power
/// P_dBm through a line of total attenuation A_dB, single-port reflection
/// geometry: epsilon = sqrt(kappa * P_in / (hbar * omega_p)).
inline double epsilon_from_dbm(double p_dbm, double atten_db, double kappa, double omega_p) {
    const double p_in = dbm_to_watt(p_dbm - atten_db);
    return std::sqrt(kappa * p_in / (constants().hbar * omega_p));
}

/// Inverse of epsilon_from_dbm.
inline double dbm_from_epsilon(double epsilon, double atten_db, double kappa, double omega_p) {
    const double p_in = epsilon * epsilon * constants().hbar * omega_p / kappa;
    return watt_to_dbm(p_in) + atten_db;
}

}  // namespace kerrsim::units
