#pragma once

#include <optional>
#include <vector>

#include "kerrsim/backaction.hpp"
#include "kerrsim/circuit.hpp"
#include "kerrsim/fits.hpp"
#include "kerrsim/husimi.hpp"
#include "kerrsim/lindblad.hpp"
#include "kerrsim/pulse.hpp"
#include "kerrsim/semiclassical.hpp"
#include "kerrsim/transmon.hpp"

namespace kerrsim {

/// Everything the protocols need to know about the device. A missing
/// transmon spectrum means resonator-only runs (M = 1).
struct SystemModel {
    KerrParameters kerr;
    std::optional<TransmonSpectrum> transmon;
    std::vector<double> g;  ///< nearest-neighbor couplings (rad/s)
    QubitDissipation dissipation;

    int m_levels() const { return transmon ? transmon->levels() : 1; }
};

struct NumericsOptions {
    int n_fock = 0;        ///< 0: sized from the semiclassical H branch
    double dt = 0;         ///< 0: automatic
    double dt_scale = 1.0;
    double fock_tail_tol = 1e-5;
    double trace_tol = 1e-6;
    int workers = 1;
    double grid_step = 0.2;  ///< Husimi resolution for p_s
};

struct ScurvePoint {
    double eps_m = 0;          ///< measurement amplitude (rad/s)
    double p_s = 0;            ///< switching probability at end of hold
    double p_s_hold_start = 0; ///< same just after the ramp down (latching check)
};

struct SCurve {
    std::vector<ScurvePoint> points;
    double omega_reduced = 0;
    PulseProfile pulse;            ///< eps_measure field is the per-point sweep value
    std::optional<int> prep;
    double temperature = 0;

    std::vector<double> eps() const;
    std::vector<double> ps() const;
    /// Largest |p_s(end of hold) - p_s(start of hold)| over the sweep.
    double max_hold_drift() const;
};

struct WidthPoint {
    double temperature = 0;
    double width = 0;  ///< erf-fit sigma, in drive-amplitude units (rad/s)
    ErfFit fit;
};

struct ContrastResult {
    double best_contrast = 0;
    double best_eps = 0;
    SCurve curve_ground;
    SCurve curve_excited;
};

struct PullResult {
    double delta_omega_1 = 0;  ///< frequency shift matching the |1> S-curve (rad/s)
    double two_chi = 0;        ///< 2 chi from dispersive_chi, for comparison
    std::vector<double> scan_delta;  ///< scanned shifts
    std::vector<double> scan_l2;     ///< L2 distance per shift
};

struct RabiPoint {
    double duration = 0;
    double p_e = 0;
};

struct RabiResult {
    std::vector<RabiPoint> points;
    DampedSineFit fit;
};

struct SpectroscopyPoint {
    double omega_s = 0;
    double p_e = 0;
};

struct SpectroscopyLine {
    std::vector<SpectroscopyPoint> points;
    LorentzianFit fit;        ///< over (omega_s, p_e)
    double delta_omega01 = 0; ///< fitted center minus bare omega01 (rad/s)
    double fwhm = 0;          ///< rad/s
    double gamma2 = 0;        ///< pi * FWHM(Hz) = FWHM(rad/s) / 2
    bool lorentzian_ok = true;///< fit rms below 10% of the peak height
    Branch branch = Branch::L;
};

/// Drive the JBA pulse for each measurement amplitude and read the switching
/// probability from the Q distribution at the end (and start) of the hold.
/// The initial state is vacuum (or a thermal state at `temperature`) times
/// the prepared qubit level.
SCurve run_scurve(const SystemModel& model, const PulseProfile& pulse, double omega_reduced,
                  const std::vector<double>& eps_m_list, std::optional<int> prep,
                  double temperature, const NumericsOptions& numerics = {});

std::vector<WidthPoint> scurve_width_vs_temperature(const SystemModel& model,
                                                    const PulseProfile& pulse,
                                                    double omega_reduced,
                                                    const std::vector<double>& eps_m_list,
                                                    const std::vector<double>& temperatures,
                                                    const NumericsOptions& numerics = {});

/// S-curves for the qubit prepared in |0> and in |1> (or |2> with shelving:
/// the pi-pulse is modelled as an instantaneous 1 -> 2 transfer);
/// contrast(eps) = p_s^(e) - p_s^(0), maximized over the sweep.
ContrastResult readout_contrast(const SystemModel& model, const PulseProfile& pulse,
                                double omega_reduced, const std::vector<double>& eps_m_list,
                                bool shelving, const NumericsOptions& numerics = {});

/// Finds the drive-frequency shift that maps the |0> S-curve onto the |1>
/// S-curve (L2 distance over the common amplitude grid, parabolic refinement
/// around the discrete minimum). Theory value 2 chi attached for comparison.
/// Throws when the minimum sits on the scan edge.
PullResult cavity_pull_from_scurves(const SystemModel& model, const PulseProfile& pulse,
                                    double omega_reduced, const std::vector<double>& eps_m_list,
                                    const std::vector<double>& delta_omega_scan,
                                    const NumericsOptions& numerics = {});

/// Resonant qubit drive of varying duration; the excited population is read
/// ideally (default) or through the full JBA pulse. Fit: damped sine.
RabiResult rabi_experiment(const SystemModel& model, double eps_s, double omega_s,
                           const std::vector<double>& durations,
                           const NumericsOptions& numerics = {});

struct SpectroscopyConfig {
    double omega_reduced = 0;   ///< pump detuning
    double eps_p = 0;           ///< pump amplitude (rad/s)
    double eps_s = 0;           ///< spectroscopy amplitude (rad/s)
    double equilibration = 10;  ///< pump-only lead time, units of 1/kappa
    double window = 0;          ///< spectroscopy time (s); 0 -> 6 / gamma2_guess
    double gamma2_guess = 0;    ///< sets the default window; 0 -> from dissipation
    Branch branch = Branch::L;  ///< resonator initialization branch
};

/// Qubit line under a stationary pump: the resonator starts on the requested
/// semiclassical branch, equilibrates, then a weak spectroscopy tone probes
/// omega_s; the excited population is averaged over the window tail.
SpectroscopyLine pumped_spectroscopy(const SystemModel& model, const SpectroscopyConfig& cfg,
                                     const std::vector<double>& omega_s_list,
                                     const NumericsOptions& numerics = {});

/// Dispersive pull of the resonator by qubit level i,
/// chi_{i-1,i} - chi_{i,i+1} with chi_{ij} = g_ij^2/(omega_ij - omega_r)
/// (zero for a bare resonator). The ground level pushes the resonator up for
/// a qubit below it.
double resonator_pull(const SystemModel& model, int level);

/// Reduced detuning seen by the resonator when the qubit sits in `level`:
/// omega_reduced + 2 pull / kappa. Thresholds, separatrix and Fock sizing in
/// the protocols use this dressed value.
double dressed_omega_reduced(const SystemModel& model, double omega_reduced, int level);

/// Fock truncation for a drive sweep: largest semiclassical root over the
/// sweep at the dressed ground-level detuning, padded via suggest_fock_dim
/// plus thermal headroom. An explicit numerics.n_fock wins.
int fock_dim_for_sweep(const SystemModel& model, double omega_reduced, double eps_max,
                       const NumericsOptions& numerics, double n_th = 0.0);

}  // namespace kerrsim
