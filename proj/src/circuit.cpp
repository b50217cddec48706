#include "kerrsim/circuit.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "kerrsim/constants.hpp"

namespace kerrsim {

double thermal_photons(double omega, double temperature) {
    if (temperature <= 0.0) return 0.0;
    const double x = constants().hbar * omega / (constants().k_B * temperature);
    return 1.0 / std::expm1(x);
}

std::pair<double, double> kerr_constants(double p, double omega_r, double z_e) {
    if (p < 0.0 || p >= 1.0) throw std::domain_error("kerr_constants: participation ratio outside [0, 1)");
    if (p == 0.0) return {0.0, 0.0};
    const double k = -M_PI * p * p * p * omega_r * z_e / constants().R_K;
    const double kp = (2.0 / (3.0 * p)) * (k * k / omega_r) * (10.0 * p - 9.0);
    return {k, kp};
}

KerrParameters derive_equivalent_circuit(const JunctionResonatorSpec& spec) {
    if (spec.i0 <= 0.0) throw std::domain_error("derive_equivalent_circuit: i0 must be > 0");
    if (spec.omega1 <= 0.0) throw std::domain_error("derive_equivalent_circuit: omega1 must be > 0");
    if (spec.z0 <= 0.0) throw std::domain_error("derive_equivalent_circuit: z0 must be > 0");
    if (spec.q_factor <= 1.0) throw std::domain_error("derive_equivalent_circuit: Q must be > 1");
    if (spec.temperature < 0.0) throw std::domain_error("derive_equivalent_circuit: temperature must be >= 0");

    KerrParameters out;
    out.L_J = constants().phi0 / spec.i0;
    out.L_e = M_PI * spec.z0 / (2.0 * spec.omega1);
    out.C_e = 2.0 / (M_PI * spec.z0 * spec.omega1);
    out.L_t = out.L_J + out.L_e;
    out.p = out.L_J / out.L_t;
    out.omega_r = 1.0 / std::sqrt(out.L_t * out.C_e);
    out.Z_e = std::sqrt(out.L_t / out.C_e);
    out.kappa = out.omega_r / spec.q_factor;
    out.z0 = spec.z0;
    std::tie(out.K, out.Kp) = kerr_constants(out.p, out.omega_r, out.Z_e);
    out.n_th = thermal_photons(out.omega_r, spec.temperature);
    return out;
}

double omega1_for_fundamental(double omega_r_target, double i0, double z0) {
    if (omega_r_target <= 0.0 || i0 <= 0.0 || z0 <= 0.0)
        throw std::domain_error("omega1_for_fundamental: inputs must be > 0");
    // a x^2 - b x - 1 = 0 with a = 1/omega_r^2, b = 2 L_J / (pi Z0), x = omega1
    const double l_j = constants().phi0 / i0;
    const double a = 1.0 / (omega_r_target * omega_r_target);
    const double b = 2.0 * l_j / (M_PI * z0);
    return (b + std::sqrt(b * b + 4.0 * a)) / (2.0 * a);
}

}  // namespace kerrsim
