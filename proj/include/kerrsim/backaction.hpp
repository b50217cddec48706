#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "kerrsim/circuit.hpp"
#include "kerrsim/hilbert.hpp"
#include "kerrsim/semiclassical.hpp"
#include "kerrsim/transmon.hpp"

namespace kerrsim {

/// Two-level dispersive summary: chi = chi01 - chi12/2, s_bar = -chi12/2,
/// n_crit = Delta^2 / (4 g^2), referenced to the bare resonator frequency.
struct ChiSet {
    double chi = 0;
    double s_bar = 0;
    double n_crit = 0;
    double chi01 = 0;
    double chi12 = 0;
};

/// Pump-frequency-referenced dispersive ladder:
///   lambda_i = -g_i / (omega_{i+1} - omega_i - omega_p)
///   chi_i    = -g_i lambda_i = g_i^2 / (omega_{i+1} - omega_i - omega_p)
///   S_i      = -(chi_i - chi_{i-1})
///   K_i      = -4 S_i (|l_i|^2 + |l_{i-1}|^2) - (3 chi_{i+1} |l_i|^2 - chi_i |l_{i+1}|^2)
///              + 3 (chi_{i-2} |l_{i-1}|^2 - chi_{i-1} |l_{i-2}|^2)
/// Out-of-range indices contribute zero.
struct DispersiveConstants {
    double omega_p = 0;
    std::vector<double> lambda_p;  ///< size M-1
    std::vector<double> chi_p;     ///< size M-1
    std::vector<double> s_p;       ///< size M, rad/s per photon
    std::vector<double> k_p;       ///< size M, rad/s per photon^2
    std::vector<double> g;         ///< couplings used
    Eigen::VectorXd omega;         ///< bare qubit frequencies used
    bool lambda_valid = true;      ///< all |lambda| < 0.3

    int levels() const { return static_cast<int>(s_p.size()); }
};

/// Qubit-state-dependent self-consistent pump/spectroscopy fields.
struct PointerStates {
    std::vector<cplx> alpha_p;
    std::vector<cplx> alpha_s;
    std::vector<Branch> branch;
    double distinguishability = 0;  ///< D = |alpha_{p,1} - alpha_{p,0}|
    bool d_valid = true;            ///< D^2 < 0.5 (analytic-formula validity)
};

/// Level shifts after the second (resonator-frequency-referenced) dispersive
/// step: omega''' = omega + S n + K n^2 / 4 + Lamb shift.
struct StarkLambShifts {
    std::vector<double> omega_pp;    ///< omega'' (Stark-shifted, no Lamb)
    std::vector<double> omega_ppp;   ///< omega''' (with Lamb shift)
    std::vector<double> lamb;        ///< L_i^r
    std::vector<double> lambda_r;    ///< size M-1
    double omega_r_prime = 0;        ///< Kerr-shifted resonator frequency
};

struct BackactionRates {
    double gamma_down = 0;
    double gamma_up = 0;
    double gamma_phi_tp = 0;   ///< gamma_phi'''
    double gamma_2_pred = 0;   ///< gamma_down/2 + gamma_up/2 + gamma_phi'''
    double distinguishability = 0;
    bool valid = true;         ///< D^2 < 0.5 and |lambda| < 0.3
};

struct LinearPointerStates {
    cplx alpha_0, alpha_1;
    double distinguishability = 0;
    double gamma_phi_m = 0;     ///< 2 chi Im[alpha_0 alpha_1^*] = kappa D^2 / 2
    double delta_omega_a = 0;   ///< 2 chi Re[alpha_0 alpha_1^*]
};

/// Per-level branch requests for pointer_states; empty entries follow the
/// default policy (L while it exists, otherwise H).
struct BranchPolicy {
    std::vector<std::optional<Branch>> per_level;

    static BranchPolicy adiabatic() { return {}; }
    static BranchPolicy uniform(Branch b, int m_levels) {
        BranchPolicy p;
        p.per_level.assign(static_cast<size_t>(m_levels), b);
        return p;
    }
};

/// Second-order dispersive shifts referenced to the resonator frequency.
/// Throws when a transition is resonant with the resonator.
ChiSet dispersive_chi(const TransmonSpectrum& spectrum, const std::vector<double>& g_list,
                      double omega_r);

/// Pump-referenced constants for all M levels. Throws (naming the level
/// pair) on an exact resonance omega_{i+1} - omega_i = omega_p.
DispersiveConstants dispersive_constants(const TransmonSpectrum& spectrum,
                                         const std::vector<double>& g_list, double omega_p);

/// Solve, per level i, the self-consistent pump amplitude
///   [(omega_r - omega_p + S_i - i kappa/2) + (K + K_i/6)|a|^2 + K'|a|^4] a + eps_p = 0
/// and the closed-form spectroscopy field
///   alpha_s = -eps_s / [(omega_r - omega_s - i kappa/2) + K|a_p|^2 + K'|a_p|^4].
/// Branch selection per policy; throws when a requested branch is absent.
PointerStates pointer_states(const DispersiveConstants& constants, const KerrParameters& kerr,
                             double omega_p, double eps_p, double eps_s, double omega_s,
                             const BranchPolicy& policy = {});

/// omega_i''(a) = omega_i + S_i |a_p,i|^2 + K_i |a_p,i|^4 / 4 (level's own
/// amplitude), omega_r'(a) = omega_r + 2K|a|^2 + 3K'|a|^4 evaluated at the
/// level-0 amplitude, lambda_i^r = -g_i / (omega''_{i+1} - omega''_i -
/// omega_r'), L_i^r = -g_{i-1} lambda_{i-1}^r with L_0^r = 0.
StarkLambShifts stark_lamb_shifts(const DispersiveConstants& constants,
                                  const PointerStates& pointer, const KerrParameters& kerr);

/// Modified two-level rates (levels 0 and 1):
///   gamma_up   = (2 gamma_phi + kappa D^2) |lambda_0^p|^2 |alpha_p,0|^2
///   gamma_down = gamma + gamma_up + |lambda_0^r|^2 kappa
///   gamma_phi''' = gamma_phi + kappa D^2/2
///                + gamma |2 chi_0^p a_p,0 - chi_1^p a_p,1|^2 / (2 g_0^2)
BackactionRates rates(const DispersiveConstants& constants, const PointerStates& pointer,
                      const StarkLambShifts& shifts, const KerrParameters& kerr,
                      const QubitDissipation& dissipation);

/// Linear-resonator reference: alpha_{0,1} = -eps_p / [(omega_r - omega_p
/// +- chi) - i kappa/2], Gamma_phi_m = 2 chi Im[a0^* a1] (the ordering that
/// makes Gamma_phi_m = kappa D^2 / 2 exact under the e^{-i omega t} drive
/// convention), delta_omega_a = 2 chi Re[a0 a1^*].
LinearPointerStates linear_pointer_states(double chi, double omega_r, double omega_p,
                                          double eps_p, double kappa);

/// Invert delta_omega01 = (S_1 - S_0) n + (K_1 - K_0) n^2 / 4 for the
/// smallest non-negative root on the physical branch. Throws when no
/// non-negative solution exists.
double nbar_from_stark(double delta_omega01, const DispersiveConstants& constants);

}  // namespace kerrsim
