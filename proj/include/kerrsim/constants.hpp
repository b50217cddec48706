#pragma once

namespace kerrsim {

/// Fundamental constants (2019 SI exact values; hbar derived from h so that
/// R_K = 2 pi hbar / e^2 holds to machine precision). phi0 is the reduced
/// superconducting flux quantum hbar/2e, R_K the resistance quantum h/e^2.
struct PhysicalConstants {
    double h = 6.62607015e-34;    // J s
    double e = 1.602176634e-19;   // C
    double k_B = 1.380649e-23;    // J/K
    double hbar = 6.62607015e-34 / 6.283185307179586476925287;            // J s
    double phi0 = hbar / (2.0 * 1.602176634e-19);                         // Wb
    double R_K = 6.62607015e-34 / (1.602176634e-19 * 1.602176634e-19);    // Ohm
};

inline const PhysicalConstants& constants() {
    static const PhysicalConstants c{};
    return c;
}

}  // namespace kerrsim
