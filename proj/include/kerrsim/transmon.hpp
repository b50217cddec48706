#pragma once

#include <Eigen/Dense>
#include <vector>

namespace kerrsim {

/// Split Cooper-pair box parameters. Energies are expressed as angular
/// frequencies E/hbar (rad/s) throughout; GHz conversion happens at the I/O
/// boundary.
struct TransmonSpec {
    double ej0 = 0;         ///< single-junction Josephson energy / hbar (rad/s)
    double ec = 0;          ///< charging energy (2e)^2/2C / hbar (rad/s)
    double ng = 0;          ///< reduced gate charge
    double flux_ratio = 0;  ///< Phi / Phi0 threading the SQUID
    int n_charge_cutoff = 20;  ///< charge basis spans N in [-cutoff, cutoff]
    int m_levels = 3;       ///< retained eigenstates
};

/// Diagonalized spectrum: eigenfrequencies (offset so omega[0] = 0) and the
/// Cooper-pair-number matrix elements <i|N|j> in the eigenbasis, gauge-fixed
/// so that <i|N|i+1> > 0.
struct TransmonSpectrum {
    Eigen::VectorXd omega;     ///< size M, rad/s, strictly increasing
    Eigen::MatrixXd n_matrix;  ///< M x M, real symmetric
    double ej_eff = 0;         ///< E_J(Phi) / hbar used for this spectrum (rad/s)

    int levels() const { return static_cast<int>(omega.size()); }
    double omega01() const { return omega(1); }
    double anharmonicity() const { return omega(2) - 2.0 * omega(1); }
};

/// Relaxation and pure dephasing rates. Multilevel relaxation follows
/// gamma_{i+1,i} = (i+1) gamma; dephasing defaults to a flat per-level rate.
struct QubitDissipation {
    double gamma = 0;                 ///< |1> -> |0> rate (rad/s)
    std::vector<double> gamma_phi;    ///< per-level pure dephasing (rad/s)

    static QubitDissipation flat(double gamma, double gamma_phi, int m_levels);
};

/// E_J(Phi) = 2 E_J0 |cos(pi Phi/Phi0)|
double effective_ej(double ej0, double flux_ratio);

/// Diagonalize H = E_C (N - N_g)^2 - E_J(Phi) cos(theta) in the charge basis
/// (cos(theta) couples neighboring charge states with -E_J/2). Throws if the
/// requested level count is not well inside the charge cutoff.
TransmonSpectrum diagonalize_cpb(const TransmonSpec& spec);

/// Vacuum voltage fluctuation amplitude at the qubit coupling point,
/// deltaV0 = omega_r sqrt(hbar Z0 / pi)  (V).
double vacuum_voltage(double omega_r, double z0);

/// Nearest-neighbor couplings g_{i,i+1} = 2 e beta <i|N|i+1> deltaV0 / hbar.
std::vector<double> coupling_constants(const TransmonSpectrum& spectrum, double beta,
                                       double delta_v0);

/// Invert (E_J, E_C) -> (omega01, omega12 - omega01) by 2-D Newton iteration
/// at fixed ng. Tolerance 2*pi*1 kHz on both targets. Returns a spec with
/// flux_ratio = 0 (ej0 = ej_eff / 2).
TransmonSpec fit_transmon_from_frequencies(double omega01, double anharmonicity, double ng = 0.0,
                                           int n_charge_cutoff = 20, int m_levels = 3);

}  // namespace kerrsim
