#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "kerrsim/circuit.hpp"

namespace kerrsim {

enum class Branch { L, H, Unstable };

std::string to_string(Branch b);

/// A microwave tone on the resonator.
struct DriveSpec {
    enum class Label { Pump, Spectroscopy, Readout };
    double omega_d = 0;                  ///< angular frequency (rad/s)
    std::complex<double> epsilon = 0.0;  ///< amplitude (rad/s)
    Label label = Label::Pump;
};

/// One steady-state solution of the pumped Kerr oscillator.
struct SteadyStateSolution {
    std::complex<double> alpha;  ///< intracavity field amplitude
    double n = 0;                ///< |alpha|^2
    bool stable = false;
    Branch branch = Branch::Unstable;
};

struct CriticalPoint {
    double omega_c = 0;    ///< reduced detuning sqrt(3)
    double epsilon_c = 0;  ///< drive amplitude at the critical point (rad/s)
    double n_c = 0;        ///< photon number at the critical point
};

struct GainResult {
    double gain = 0;  ///< |d alpha / d eps| normalized to the resonant linear value
    bool diverged = false;
};

/// Omega = 2 Q (1 - omega_p / omega_r) = 2 (omega_r - omega_p) / kappa.
double reduced_detuning(double omega_p, const KerrParameters& kerr);

/// Inverse of reduced_detuning.
double pump_frequency(double omega_reduced, const KerrParameters& kerr);

/// Steady states of  [(delta - i kappa/2) + K n + K' n^2] alpha + eps = 0
/// with n = |alpha|^2 and delta the pump detuning (rad/s). Solves the real
/// polynomial in n (cubic, or quintic when K' is kept) by bracketed bisection
/// on its monotone pieces; stability by branch ordering (middle root of three
/// is unstable). Sorted by ascending n.
std::vector<SteadyStateSolution> steady_states_detuned(double delta, double kappa, double kerr_k,
                                                       double kerr_kp,
                                                       std::complex<double> epsilon);

/// Same, parameterized by the reduced detuning Omega; K' enters only when
/// include_kp is set.
std::vector<SteadyStateSolution> steady_states(double omega_reduced,
                                               std::complex<double> epsilon_p,
                                               const KerrParameters& kerr,
                                               bool include_kp = false);

/// Drive amplitudes (eps_minus, eps_plus) bounding the bistable window at
/// reduced detuning Omega, or nullopt when Omega <= sqrt(3).
std::optional<std::pair<double, double>> bifurcation_thresholds(double omega_reduced,
                                                                const KerrParameters& kerr,
                                                                bool include_kp = false);

/// Critical point of the bistability region: Omega_c = sqrt(3) analytically,
/// epsilon_c from the coalescing fold of the cubic. Throws for K = 0.
CriticalPoint critical_point(const KerrParameters& kerr);

/// Small-signal gain |d alpha / d eps_p| on the selected stable branch,
/// normalized so that the linear resonator at Omega = 0 has G = 1. A fold
/// (singular response) sets the diverged flag.
GainResult small_signal_gain(double omega_reduced, std::complex<double> epsilon_p,
                             const KerrParameters& kerr, Branch branch = Branch::L,
                             bool include_kp = false);

/// Amplitude of the oscillating junction current, I = sqrt(hbar/(pi Z0)) omega_r |alpha|.
double junction_current(std::complex<double> alpha, const KerrParameters& kerr);

/// First solution on the requested branch, if present.
std::optional<SteadyStateSolution> pick_branch(const std::vector<SteadyStateSolution>& sols,
                                               Branch branch);

}  // namespace kerrsim
