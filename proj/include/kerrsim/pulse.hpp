#pragma once

#include <stdexcept>

namespace kerrsim {

/// Piecewise-linear JBA pulse envelope: amplitude ramps 0 -> eps_measure over
/// t_rise, stays flat for t_measure, ramps to eps_hold over t_fall and stays
/// there for t_hold. Amplitudes in rad/s.
struct PulseProfile {
    double t_rise = 0;
    double t_measure = 0;
    double t_fall = 0;
    double t_hold = 0;
    double eps_measure = 0;
    double eps_hold = 0;

    double measure_end() const { return t_rise + t_measure; }
    double hold_start() const { return t_rise + t_measure + t_fall; }
    double duration() const { return t_rise + t_measure + t_fall + t_hold; }

    void validate() const {
        if (t_rise <= 0 || t_measure < 0 || t_hold < 0 || t_fall < 0)
            throw std::domain_error("PulseProfile: segment durations must be non-negative, t_rise > 0");
        if (eps_measure < 0 || eps_hold < 0)
            throw std::domain_error("PulseProfile: amplitudes must be >= 0");
        if (t_fall == 0 && eps_hold != eps_measure)
            throw std::domain_error("PulseProfile: zero t_fall breaks envelope continuity");
    }

    /// Envelope amplitude at time t (eps_hold after the pulse end).
    double amplitude(double t) const {
        if (t <= 0) return 0.0;
        if (t < t_rise) return eps_measure * (t / t_rise);
        if (t < measure_end()) return eps_measure;
        if (t < hold_start()) {
            const double u = (t - measure_end()) / t_fall;
            return eps_measure + (eps_hold - eps_measure) * u;
        }
        return eps_hold;
    }

    /// Largest amplitude over the pulse.
    double peak() const { return eps_measure > eps_hold ? eps_measure : eps_hold; }
};

}  // namespace kerrsim
