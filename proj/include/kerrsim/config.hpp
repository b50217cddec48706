#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerrsim/circuit.hpp"
#include "kerrsim/experiments.hpp"
#include "kerrsim/pulse.hpp"

namespace kerrsim {

struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_no, const std::string& what)
        : std::runtime_error("config line " + std::to_string(line_no) + ": " + what),
          line(line_no) {}
};

// Flat INI-style sections with unit-suffixed keys; an optional unit token
// after the value must match the suffix (e.g. "t_rise_ns = 50 ns").

struct CircuitSection {
    // derived mode (junction + bare resonator)
    std::optional<double> i0_na;
    std::optional<double> f1_ghz;   ///< bare frequency without the junction
    std::optional<double> fr_ghz;   ///< alternative: target loaded fundamental
    std::optional<double> z0_ohm;
    // direct mode (measured Kerr constants)
    std::optional<double> k_khz;
    std::optional<double> kp_khz;
    std::optional<double> kappa_mhz;
    std::optional<double> q;
    double temperature_mk = 0;
};

struct TransmonSection {
    std::optional<double> ej_ghz, ec_ghz;
    std::optional<double> f01_ghz, anharmonicity_mhz;
    double ng = 0;
    double flux_ratio = 0;
    int levels = 3;
    int n_cutoff = 20;
    std::optional<double> t1_us, tphi_us;
};

struct CouplingSection {
    std::optional<double> g_mhz;  ///< direct g01 override
    std::optional<double> beta;   ///< else computed from beta and deltaV0
};

struct PulseSection {
    double t_rise_ns = 50;
    double t_measure_ns = 250;
    double t_fall_ns = 10;
    double t_hold_ns = 250;
    std::optional<double> eps_measure_mhz, p_measure_dbm;
    std::optional<double> eps_hold_mhz, p_hold_dbm;
    std::optional<double> hold_fraction;  ///< eps_hold as a fraction of eps_plus
};

struct SweepSection {
    int points = 11;
    std::optional<double> eps_from_mhz, eps_to_mhz;
    std::optional<double> p_from_dbm, p_to_dbm;
    std::optional<double> f_s_from_ghz, f_s_to_ghz;
    std::optional<double> t_from_ns, t_to_ns;
    std::vector<double> temperatures_mk;
    std::vector<double> omegas;  ///< reduced detunings
};

struct ExperimentSection {
    std::optional<double> omega_reduced;
    std::optional<double> f_m_ghz;  ///< alternative to omega_reduced
    int prep = 0;
    bool shelving = false;
    double attenuation_db = 0;
    std::string branch = "L";
    double equilibration = 10;  ///< pump lead time in units of 1/kappa
    std::optional<double> window_us;
    std::optional<double> eps_p_mhz, p_p_dbm;  ///< pump amplitude (spectroscopy/backaction)
    std::optional<double> eps_s_mhz;           ///< qubit-drive amplitude
    std::optional<double> f_s_ghz;             ///< qubit-drive frequency (rabi)
    std::optional<double> gamma2_guess_mhz;
    bool ideal_readout = true;
};

struct NumericsSection {
    int n_fock = 0;
    double dt_scale = 1.0;
    std::optional<double> dt_ps;
    double fock_tail_tol = 1e-5;
    double trace_tol = 1e-6;
    int workers = 1;
    double grid_step = 0.2;
};

struct RunConfig {
    CircuitSection circuit;
    std::optional<TransmonSection> transmon;
    CouplingSection coupling;
    PulseSection pulse;
    SweepSection sweep;
    ExperimentSection experiment;
    NumericsSection numerics;
};

/// Parse and validate. Unknown keys, unit mismatches and malformed values
/// raise ConfigError naming the line.
RunConfig parse_config(const std::string& text);

/// Canonical text form; parse(serialize(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

// Bridges from config values to engine inputs.
KerrParameters build_kerr(const CircuitSection& circuit);
SystemModel build_system_model(const RunConfig& config);
NumericsOptions build_numerics(const NumericsSection& numerics);
PulseProfile build_pulse(const RunConfig& config, const KerrParameters& kerr,
                         double omega_reduced);
/// Sweep of measurement amplitudes (rad/s), from either the eps or the dBm range.
std::vector<double> sweep_amplitudes(const RunConfig& config, const KerrParameters& kerr,
                                     double omega_reduced);

}  // namespace kerrsim
