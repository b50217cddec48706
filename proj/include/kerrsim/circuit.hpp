#pragma once

#include <utility>

namespace kerrsim {

/// Physical parameters of a Josephson junction embedded in a coplanar
/// resonator, probed in reflection through a coupling capacitor.
struct JunctionResonatorSpec {
    double i0 = 0;      ///< junction critical current (A)
    double omega1 = 0;  ///< bare resonator angular frequency, no junction (rad/s)
    double z0 = 50.0;   ///< line characteristic impedance (Ohm)
    double q_factor = 0;///< loaded quality factor
    double temperature = 0;  ///< bath temperature (K)
};

/// Effective Kerr-oscillator constants of the fundamental mode.
struct KerrParameters {
    double omega_r = 0;  ///< fundamental mode angular frequency (rad/s)
    double K = 0;        ///< Kerr constant (rad/s), < 0 for a junction
    double Kp = 0;       ///< fifth-order constant K' (rad/s)
    double kappa = 0;    ///< damping rate omega_r / Q (rad/s)
    double p = 0;        ///< participation ratio L_J / L_t
    double L_J = 0;      ///< junction inductance (H)
    double L_e = 0;      ///< equivalent series inductance (H)
    double L_t = 0;      ///< total inductance (H)
    double C_e = 0;      ///< equivalent series capacitance (F)
    double Z_e = 0;      ///< sqrt(L_t / C_e) (Ohm)
    double z0 = 50.0;    ///< line impedance, kept for current conversion (Ohm)
    double n_th = 0;     ///< thermal photon number of the bath
};

/// n_th = 1 / (exp(hbar omega / k_B T) - 1); zero at T = 0.
double thermal_photons(double omega, double temperature);

/// Third- and fifth-order nonlinear constants of the junction-loaded mode:
///   K  = -pi p^3 omega_r Z_e / R_K
///   K' = (2 / 3p) (K^2 / omega_r) (10 p - 9)
/// Both vanish at p = 0 (K^2 ~ p^6 removes the 1/p).
std::pair<double, double> kerr_constants(double p, double omega_r, double z_e);

/// Map junction + resonator parameters onto the equivalent series circuit
/// (analytic small-L_J limit: L_e = pi Z0 / 2 omega1, C_e = 2 / pi Z0 omega1)
/// and evaluate the Kerr constants. Throws std::domain_error on non-positive
/// inputs or Q <= 1.
KerrParameters derive_equivalent_circuit(const JunctionResonatorSpec& spec);

/// Bare frequency omega1 which makes the junction-loaded fundamental land on
/// omega_r_target, for given critical current and line impedance. Closed-form
/// inversion of 1/omega_r^2 = 2 L_J / (pi Z0 omega1) + 1/omega1^2.
double omega1_for_fundamental(double omega_r_target, double i0, double z0);

}  // namespace kerrsim
