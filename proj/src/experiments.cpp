#include "kerrsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kerrsim/parallel.hpp"

namespace kerrsim {

std::vector<double> SCurve::eps() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.eps_m);
    return v;
}

std::vector<double> SCurve::ps() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.p_s);
    return v;
}

double SCurve::max_hold_drift() const {
    double d = 0.0;
    for (const auto& p : points) d = std::max(d, std::abs(p.p_s - p.p_s_hold_start));
    return d;
}

double resonator_pull(const SystemModel& model, int level) {
    if (!model.transmon || model.g.empty()) return 0.0;
    const TransmonSpectrum& s = *model.transmon;
    if (level < 0 || level >= s.levels())
        throw std::domain_error("resonator_pull: level out of range");
    auto chi = [&](int i) {  // chi_{i,i+1}
        if (i < 0 || i + 1 >= s.levels() || i >= static_cast<int>(model.g.size())) return 0.0;
        const double detuning = s.omega(i + 1) - s.omega(i) - model.kerr.omega_r;
        return model.g[static_cast<size_t>(i)] * model.g[static_cast<size_t>(i)] / detuning;
    };
    return chi(level - 1) - chi(level);
}

double dressed_omega_reduced(const SystemModel& model, double omega_reduced, int level) {
    return omega_reduced + 2.0 * resonator_pull(model, level) / model.kerr.kappa;
}

int fock_dim_for_sweep(const SystemModel& model, double omega_reduced, double eps_max,
                       const NumericsOptions& numerics, double n_th) {
    if (numerics.n_fock > 0) return numerics.n_fock;
    // the ground level has the largest pull, hence the largest H-branch
    const double omega_eff = dressed_omega_reduced(model, omega_reduced, 0);
    double n_max = 1.0;
    for (const auto& s : steady_states(omega_eff, 1.05 * eps_max, model.kerr))
        n_max = std::max(n_max, s.n);
    int nf = suggest_fock_dim(n_max * (1.0 + 1.5 * n_th));
    const int cap = max_hilbert_dim() / model.m_levels();
    if (nf > cap) nf = cap;  // the truncation check reports if this is too tight
    return nf;
}

namespace {

EvolveOptions evolve_options(const NumericsOptions& numerics) {
    EvolveOptions eo;
    eo.dt = numerics.dt;
    eo.dt_scale = numerics.dt_scale;
    eo.fock_tail_tol = numerics.fock_tail_tol;
    eo.trace_tol = numerics.trace_tol;
    return eo;
}

const TransmonSpectrum* spectrum_of(const SystemModel& model) {
    return model.transmon ? &*model.transmon : nullptr;
}

QubitDissipation dissipation_of(const SystemModel& model) {
    return model.transmon ? model.dissipation : QubitDissipation{};
}

}  // namespace

SCurve run_scurve(const SystemModel& model, const PulseProfile& pulse, double omega_reduced,
                  const std::vector<double>& eps_m_list, std::optional<int> prep,
                  double temperature, const NumericsOptions& numerics) {
    pulse.validate();
    if (eps_m_list.empty()) throw std::domain_error("run_scurve: empty sweep");
    const int prep_level = prep.value_or(0);
    if (prep_level < 0 || prep_level >= model.m_levels())
        throw std::domain_error("run_scurve: prepared level outside the retained spectrum");

    KerrParameters kerr = model.kerr;
    kerr.n_th = thermal_photons(kerr.omega_r, temperature);
    const double omega_p = pump_frequency(omega_reduced, kerr);

    const double eps_max = *std::max_element(eps_m_list.begin(), eps_m_list.end());
    HilbertConfig hc{fock_dim_for_sweep(model, omega_reduced, eps_max, numerics, kerr.n_th),
                     model.m_levels(), RotatingFrame::pump(omega_p)};
    hc.validate();

    // One separatrix for the whole sweep, at the drive conditions the latched
    // states actually see: the resonator pulled by the prepared qubit level.
    const double omega_eff = dressed_omega_reduced(model, omega_reduced, prep_level);
    const Separatrix sep = default_separatrix(kerr, omega_eff, pulse.eps_hold);
    const GridSpec grid = default_grid_for(kerr, omega_eff, pulse.eps_hold, numerics.grid_step);

    SCurve curve;
    curve.omega_reduced = omega_reduced;
    curve.pulse = pulse;
    curve.prep = prep;
    curve.temperature = temperature;
    curve.points.resize(eps_m_list.size());

    parallel_for(static_cast<int>(eps_m_list.size()), numerics.workers, [&](int idx) {
        PulseProfile p = pulse;
        p.eps_measure = eps_m_list[static_cast<size_t>(idx)];
        const double peak = p.peak();

        auto ham = make_hamiltonian(build_static_hamiltonian(kerr, spectrum_of(model), model.g, hc));
        if (peak > 0.0)
            add_drive(ham, {omega_p, peak, DriveSpec::Label::Readout},
                      [p, peak](double t) { return p.amplitude(t) / peak; });
        const auto collapse = collapse_operators(kerr, dissipation_of(model), hc);

        const DensityMatrix rho0 = temperature > 0.0 ? thermal_state(kerr.n_th, hc, prep_level)
                                                     : vacuum_state(hc, prep_level);
        // the early-hold snapshot sits after the ~2/kappa ring-down onto the
        // hold attractors, so the latching comparison is like-for-like
        const double settle = std::min(2.0 / kerr.kappa, 0.25 * p.t_hold);
        const std::vector<double> t_grid = {0.0, p.hold_start() + settle, p.duration()};
        const auto result = evolve(rho0, ham, collapse, t_grid, evolve_options(numerics));

        ScurvePoint& pt = curve.points[static_cast<size_t>(idx)];
        pt.eps_m = p.eps_measure;
        pt.p_s_hold_start =
            switching_probability(partial_trace_resonator(result.states[1]), sep, grid);
        pt.p_s = switching_probability(partial_trace_resonator(result.states[2]), sep, grid);
    });
    return curve;
}

std::vector<WidthPoint> scurve_width_vs_temperature(const SystemModel& model,
                                                    const PulseProfile& pulse,
                                                    double omega_reduced,
                                                    const std::vector<double>& eps_m_list,
                                                    const std::vector<double>& temperatures,
                                                    const NumericsOptions& numerics) {
    std::vector<WidthPoint> out;
    for (double t : temperatures) {
        const SCurve curve = run_scurve(model, pulse, omega_reduced, eps_m_list, std::nullopt, t,
                                        numerics);
        WidthPoint wp;
        wp.temperature = t;
        wp.fit = erf_fit(curve.eps(), curve.ps());
        wp.width = wp.fit.width;
        out.push_back(wp);
    }
    return out;
}

ContrastResult readout_contrast(const SystemModel& model, const PulseProfile& pulse,
                                double omega_reduced, const std::vector<double>& eps_m_list,
                                bool shelving, const NumericsOptions& numerics) {
    if (!model.transmon) throw std::domain_error("readout_contrast: needs a transmon");
    const int excited = shelving ? 2 : 1;
    if (excited >= model.m_levels())
        throw std::domain_error("readout_contrast: not enough levels for the prepared state");

    ContrastResult out;
    out.curve_ground = run_scurve(model, pulse, omega_reduced, eps_m_list, 0, 0.0, numerics);
    out.curve_excited = run_scurve(model, pulse, omega_reduced, eps_m_list, excited, 0.0, numerics);

    for (size_t i = 0; i < eps_m_list.size(); ++i) {
        const double c = out.curve_excited.points[i].p_s - out.curve_ground.points[i].p_s;
        if (c > out.best_contrast) {
            out.best_contrast = c;
            out.best_eps = eps_m_list[i];
        }
    }
    return out;
}

PullResult cavity_pull_from_scurves(const SystemModel& model, const PulseProfile& pulse,
                                    double omega_reduced, const std::vector<double>& eps_m_list,
                                    const std::vector<double>& delta_omega_scan,
                                    const NumericsOptions& numerics) {
    if (!model.transmon) throw std::domain_error("cavity_pull_from_scurves: needs a transmon");
    if (delta_omega_scan.size() < 3)
        throw std::domain_error("cavity_pull_from_scurves: scan needs at least 3 shifts");

    const SCurve curve1 = run_scurve(model, pulse, omega_reduced, eps_m_list, 1, 0.0, numerics);

    PullResult out;
    out.two_chi = 2.0 * dispersive_chi(*model.transmon, model.g, model.kerr.omega_r).chi;
    out.scan_delta = delta_omega_scan;
    out.scan_l2.resize(delta_omega_scan.size());

    for (size_t d = 0; d < delta_omega_scan.size(); ++d) {
        // drive at omega_m - delta shifts the reduced detuning by +2 delta / kappa
        const double omega_shifted = omega_reduced + 2.0 * delta_omega_scan[d] / model.kerr.kappa;
        const SCurve curve0 =
            run_scurve(model, pulse, omega_shifted, eps_m_list, 0, 0.0, numerics);
        double l2 = 0.0;
        for (size_t i = 0; i < eps_m_list.size(); ++i) {
            const double diff = curve0.points[i].p_s - curve1.points[i].p_s;
            l2 += diff * diff;
        }
        out.scan_l2[d] = l2;
    }

    const size_t best =
        static_cast<size_t>(std::min_element(out.scan_l2.begin(), out.scan_l2.end()) -
                            out.scan_l2.begin());
    if (best == 0 || best + 1 == out.scan_l2.size())
        throw std::domain_error("cavity_pull_from_scurves: no interior minimum in the scan");

    // parabolic refinement on the three points around the minimum
    const double x0 = out.scan_delta[best - 1], x1 = out.scan_delta[best],
                 x2 = out.scan_delta[best + 1];
    const double y0 = out.scan_l2[best - 1], y1 = out.scan_l2[best], y2 = out.scan_l2[best + 1];
    const double denom = (x0 - x1) * (y2 - y1) - (x2 - x1) * (y0 - y1);
    if (denom == 0.0) {
        out.delta_omega_1 = x1;
    } else {
        const double num =
            (x0 - x1) * (x0 - x1) * (y2 - y1) - (x2 - x1) * (x2 - x1) * (y0 - y1);
        out.delta_omega_1 = x1 - 0.5 * num / denom;
    }
    return out;
}

RabiResult rabi_experiment(const SystemModel& model, double eps_s, double omega_s,
                           const std::vector<double>& durations,
                           const NumericsOptions& numerics) {
    if (!model.transmon) throw std::domain_error("rabi_experiment: needs a transmon");
    if (durations.size() < 8)
        throw std::domain_error("rabi_experiment: need at least 8 durations for the fit");

    const int n_fock = numerics.n_fock > 0 ? numerics.n_fock : 8;
    HilbertConfig hc{n_fock, model.m_levels(), RotatingFrame::pump(omega_s)};
    hc.validate();

    RabiResult out;
    out.points.resize(durations.size());

    parallel_for(static_cast<int>(durations.size()), numerics.workers, [&](int idx) {
        const double t_end = durations[static_cast<size_t>(idx)];
        auto ham = make_hamiltonian(build_static_hamiltonian(model.kerr, spectrum_of(model),
                                                             model.g, hc));
        if (eps_s != 0.0) add_drive(ham, {omega_s, eps_s, DriveSpec::Label::Spectroscopy});
        const auto collapse = collapse_operators(model.kerr, dissipation_of(model), hc);
        const DensityMatrix rho0 = vacuum_state(hc, 0);
        if (t_end <= 0.0) {
            out.points[static_cast<size_t>(idx)] = {t_end, qubit_population(rho0, 1)};
            return;
        }
        const auto result =
            evolve(rho0, ham, collapse, {0.0, t_end}, evolve_options(numerics));
        out.points[static_cast<size_t>(idx)] = {t_end, qubit_population(result.states[1], 1)};
    });

    std::vector<double> ts, ps;
    for (const auto& p : out.points) {
        ts.push_back(p.duration);
        ps.push_back(p.p_e);
    }
    out.fit = damped_sine_fit(ts, ps);
    return out;
}

SpectroscopyLine pumped_spectroscopy(const SystemModel& model, const SpectroscopyConfig& cfg,
                                     const std::vector<double>& omega_s_list,
                                     const NumericsOptions& numerics) {
    if (!model.transmon) throw std::domain_error("pumped_spectroscopy: needs a transmon");
    if (omega_s_list.size() < 8)
        throw std::domain_error("pumped_spectroscopy: need at least 8 frequencies");

    const KerrParameters& kerr = model.kerr;
    const double omega_p = pump_frequency(cfg.omega_reduced, kerr);

    // Initialize the resonator on the requested branch of the level-0 field.
    const auto constants = dispersive_constants(*model.transmon, model.g, omega_p);
    const auto pointer =
        pointer_states(constants, kerr, omega_p, cfg.eps_p, 0.0, 0.0,
                       BranchPolicy::uniform(cfg.branch, constants.levels()));
    const cplx alpha0 = pointer.alpha_p[0];

    int n_fock = numerics.n_fock;
    if (n_fock <= 0) {
        double n_max = 1.0;
        for (const auto& a : pointer.alpha_p) n_max = std::max(n_max, std::norm(a));
        n_fock = suggest_fock_dim(n_max);
    }
    HilbertConfig hc{n_fock, model.m_levels(), RotatingFrame::pump(omega_p)};
    hc.validate();

    double gamma2_guess = cfg.gamma2_guess;
    if (gamma2_guess <= 0.0) {
        const double gphi =
            model.dissipation.gamma_phi.empty() ? 0.0 : model.dissipation.gamma_phi[0];
        gamma2_guess = 0.5 * model.dissipation.gamma + gphi;
    }
    if (gamma2_guess <= 0.0)
        throw std::domain_error("pumped_spectroscopy: cannot size the window, set gamma2_guess");
    const double t_eq = cfg.equilibration / kerr.kappa;
    const double window = cfg.window > 0.0 ? cfg.window : 6.0 / gamma2_guess;

    SpectroscopyLine line;
    line.branch = cfg.branch;
    line.points.resize(omega_s_list.size());

    parallel_for(static_cast<int>(omega_s_list.size()), numerics.workers, [&](int idx) {
        const double omega_s = omega_s_list[static_cast<size_t>(idx)];
        auto ham =
            make_hamiltonian(build_static_hamiltonian(kerr, spectrum_of(model), model.g, hc));
        if (cfg.eps_p != 0.0) add_drive(ham, {omega_p, cfg.eps_p, DriveSpec::Label::Pump});
        add_drive(ham, {omega_s, cfg.eps_s, DriveSpec::Label::Spectroscopy},
                  [t_eq](double t) { return t < t_eq ? 0.0 : 1.0; });
        const auto collapse = collapse_operators(kerr, dissipation_of(model), hc);

        const DensityMatrix rho0 = coherent_state(hc, alpha0, 0);
        const std::vector<double> t_grid = {0.0, t_eq, t_eq + 0.7 * window, t_eq + 0.85 * window,
                                            t_eq + window};
        const auto result = evolve(rho0, ham, collapse, t_grid, evolve_options(numerics));
        const double p_e = (qubit_population(result.states[2], 1) +
                            qubit_population(result.states[3], 1) +
                            qubit_population(result.states[4], 1)) /
                           3.0;
        line.points[static_cast<size_t>(idx)] = {omega_s, p_e};
    });

    std::vector<double> xs, ys;
    for (const auto& p : line.points) {
        xs.push_back(p.omega_s);
        ys.push_back(p.p_e);
    }
    line.fit = lorentzian_fit(xs, ys);
    line.delta_omega01 = line.fit.center - model.transmon->omega01();
    line.fwhm = line.fit.fwhm;
    line.gamma2 = 0.5 * line.fwhm;  // Gamma_2 = pi * FWHM(Hz)
    line.lorentzian_ok =
        line.fit.amplitude > 0.0 && line.fit.rms < 0.1 * std::abs(line.fit.amplitude);
    return line;
}

}  // namespace kerrsim
