#include "kerrsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "kerrsim/units.hpp"

namespace kerrsim {

namespace {

struct RawValue {
    std::string value;
    std::string unit;
    int line = 0;
    bool consumed = false;
};

using Section = std::map<std::string, RawValue>;
using Raw = std::map<std::string, Section>;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

const std::vector<std::string> kKnownSections = {"circuit", "transmon", "coupling", "pulse",
                                                 "sweep",   "experiment", "numerics"};

Raw tokenize(const std::string& text) {
    Raw raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (std::find(kKnownSections.begin(), kKnownSections.end(), section) ==
                kKnownSections.end())
                throw ConfigError(line_no, "unknown section [" + section + "]");
            raw[section];
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
        if (section.empty()) throw ConfigError(line_no, "key outside any [section]");
        const std::string key = lower(trim(line.substr(0, eq)));
        std::string rest = trim(line.substr(eq + 1));
        if (key.empty() || rest.empty()) throw ConfigError(line_no, "empty key or value");

        RawValue rv;
        rv.line = line_no;
        // A trailing non-numeric token is a unit (values themselves may be
        // comma-separated lists, which carry no unit token).
        const size_t sp = rest.find_last_of(" \t");
        if (sp != std::string::npos && rest.find(',') == std::string::npos) {
            const std::string tail = trim(rest.substr(sp + 1));
            bool numeric = !tail.empty() && (std::isdigit(static_cast<unsigned char>(tail[0])) ||
                                             tail[0] == '-' || tail[0] == '+' || tail[0] == '.');
            if (!numeric) {
                rv.unit = lower(tail);
                rest = trim(rest.substr(0, sp));
            }
        }
        rv.value = rest;
        if (raw[section].count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
        raw[section][key] = rv;
    }
    return raw;
}

/// Expected unit token for a suffixed key ("t_rise_ns" -> "ns").
std::string unit_of_key(const std::string& key) {
    static const std::vector<std::string> suffixes = {"ghz", "mhz", "khz", "ns",  "us",
                                                      "ps",  "dbm", "mk",  "ohm", "na"};
    const size_t us = key.find_last_of('_');
    if (us == std::string::npos) return "";
    const std::string tail = key.substr(us + 1);
    for (const auto& s : suffixes)
        if (tail == s) return s;
    return "";
}

class Extractor {
  public:
    Extractor(Raw& raw, const std::string& section) : section_(section) {
        auto it = raw.find(section);
        if (it != raw.end()) sec_ = &it->second;
    }

    bool present() const { return sec_ != nullptr; }

    RawValue* find(const std::string& key) {
        if (!sec_) return nullptr;
        auto it = sec_->find(key);
        if (it == sec_->end()) return nullptr;
        it->second.consumed = true;
        if (!it->second.unit.empty() && it->second.unit != unit_of_key(key))
            throw ConfigError(it->second.line, "unit '" + it->second.unit + "' does not match key '" +
                                                  key + "'");
        return &it->second;
    }

    template <typename T>
    void get(const std::string& key, T& out) {
        if (RawValue* rv = find(key)) out = parse_scalar<T>(*rv);
    }
    template <typename T>
    void get(const std::string& key, std::optional<T>& out) {
        if (RawValue* rv = find(key)) out = parse_scalar<T>(*rv);
    }
    void get_list(const std::string& key, std::vector<double>& out) {
        RawValue* rv = find(key);
        if (!rv) return;
        out.clear();
        std::istringstream ss(rv->value);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            out.push_back(to_double(tok, rv->line));
        }
        if (out.empty()) throw ConfigError(rv->line, "empty list for '" + key + "'");
    }

    void finish() const {
        if (!sec_) return;
        for (const auto& [key, rv] : *sec_)
            if (!rv.consumed)
                throw ConfigError(rv.line, "unknown key '" + key + "' in [" + section_ + "]");
    }

  private:
    static double to_double(const std::string& s, int line) {
        size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw ConfigError(line, "not a number: '" + s + "'");
        }
        if (pos != s.size()) throw ConfigError(line, "trailing characters in number: '" + s + "'");
        return v;
    }

    template <typename T>
    static T parse_scalar(const RawValue& rv);

    Section* sec_ = nullptr;
    std::string section_;
};

template <>
double Extractor::parse_scalar<double>(const RawValue& rv) {
    return to_double(rv.value, rv.line);
}
template <>
int Extractor::parse_scalar<int>(const RawValue& rv) {
    const double v = to_double(rv.value, rv.line);
    if (v != std::floor(v)) throw ConfigError(rv.line, "expected an integer");
    return static_cast<int>(v);
}
template <>
bool Extractor::parse_scalar<bool>(const RawValue& rv) {
    const std::string v = lower(rv.value);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(rv.line, "expected a boolean");
}
template <>
std::string Extractor::parse_scalar<std::string>(const RawValue& rv) {
    return rv.value;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    Raw raw = tokenize(text);
    RunConfig c;

    {
        Extractor ex(raw, "circuit");
        ex.get("i0_na", c.circuit.i0_na);
        ex.get("f1_ghz", c.circuit.f1_ghz);
        ex.get("fr_ghz", c.circuit.fr_ghz);
        ex.get("z0_ohm", c.circuit.z0_ohm);
        ex.get("k_khz", c.circuit.k_khz);
        ex.get("kp_khz", c.circuit.kp_khz);
        ex.get("kappa_mhz", c.circuit.kappa_mhz);
        ex.get("q", c.circuit.q);
        ex.get("temperature_mk", c.circuit.temperature_mk);
        ex.finish();
    }
    {
        Extractor ex(raw, "transmon");
        if (ex.present()) {
            TransmonSection t;
            ex.get("ej_ghz", t.ej_ghz);
            ex.get("ec_ghz", t.ec_ghz);
            ex.get("f01_ghz", t.f01_ghz);
            ex.get("anharmonicity_mhz", t.anharmonicity_mhz);
            ex.get("ng", t.ng);
            ex.get("flux_ratio", t.flux_ratio);
            ex.get("levels", t.levels);
            ex.get("n_cutoff", t.n_cutoff);
            ex.get("t1_us", t.t1_us);
            ex.get("tphi_us", t.tphi_us);
            ex.finish();
            c.transmon = t;
        }
    }
    {
        Extractor ex(raw, "coupling");
        ex.get("g_mhz", c.coupling.g_mhz);
        ex.get("beta", c.coupling.beta);
        ex.finish();
    }
    {
        Extractor ex(raw, "pulse");
        ex.get("t_rise_ns", c.pulse.t_rise_ns);
        ex.get("t_measure_ns", c.pulse.t_measure_ns);
        ex.get("t_fall_ns", c.pulse.t_fall_ns);
        ex.get("t_hold_ns", c.pulse.t_hold_ns);
        ex.get("eps_measure_mhz", c.pulse.eps_measure_mhz);
        ex.get("p_measure_dbm", c.pulse.p_measure_dbm);
        ex.get("eps_hold_mhz", c.pulse.eps_hold_mhz);
        ex.get("p_hold_dbm", c.pulse.p_hold_dbm);
        ex.get("hold_fraction", c.pulse.hold_fraction);
        ex.finish();
    }
    {
        Extractor ex(raw, "sweep");
        ex.get("points", c.sweep.points);
        ex.get("eps_from_mhz", c.sweep.eps_from_mhz);
        ex.get("eps_to_mhz", c.sweep.eps_to_mhz);
        ex.get("p_from_dbm", c.sweep.p_from_dbm);
        ex.get("p_to_dbm", c.sweep.p_to_dbm);
        ex.get("f_s_from_ghz", c.sweep.f_s_from_ghz);
        ex.get("f_s_to_ghz", c.sweep.f_s_to_ghz);
        ex.get("t_from_ns", c.sweep.t_from_ns);
        ex.get("t_to_ns", c.sweep.t_to_ns);
        ex.get_list("temperatures_mk", c.sweep.temperatures_mk);
        ex.get_list("omegas", c.sweep.omegas);
        ex.finish();
    }
    {
        Extractor ex(raw, "experiment");
        ex.get("omega_reduced", c.experiment.omega_reduced);
        ex.get("f_m_ghz", c.experiment.f_m_ghz);
        ex.get("prep", c.experiment.prep);
        ex.get("shelving", c.experiment.shelving);
        ex.get("attenuation_db", c.experiment.attenuation_db);
        ex.get("branch", c.experiment.branch);
        ex.get("equilibration", c.experiment.equilibration);
        ex.get("window_us", c.experiment.window_us);
        ex.get("eps_p_mhz", c.experiment.eps_p_mhz);
        ex.get("p_p_dbm", c.experiment.p_p_dbm);
        ex.get("eps_s_mhz", c.experiment.eps_s_mhz);
        ex.get("f_s_ghz", c.experiment.f_s_ghz);
        ex.get("gamma2_guess_mhz", c.experiment.gamma2_guess_mhz);
        ex.get("ideal_readout", c.experiment.ideal_readout);
        ex.finish();
    }
    {
        Extractor ex(raw, "numerics");
        ex.get("n_fock", c.numerics.n_fock);
        ex.get("dt_scale", c.numerics.dt_scale);
        ex.get("dt_ps", c.numerics.dt_ps);
        ex.get("fock_tail_tol", c.numerics.fock_tail_tol);
        ex.get("trace_tol", c.numerics.trace_tol);
        ex.get("workers", c.numerics.workers);
        ex.get("grid_step", c.numerics.grid_step);
        ex.finish();
    }

    if (c.experiment.branch != "L" && c.experiment.branch != "H")
        throw ConfigError(0, "experiment.branch must be L or H");
    return c;
}

namespace {

class Emitter {
  public:
    void section(const std::string& name) { out_ << "[" << name << "]\n"; }
    template <typename T>
    void key(const std::string& k, const T& v) {
        out_ << k << " = " << fmt(v) << "\n";
    }
    template <typename T>
    void key(const std::string& k, const std::optional<T>& v) {
        if (v) key(k, *v);
    }
    void list(const std::string& k, const std::vector<double>& v) {
        if (v.empty()) return;
        out_ << k << " = ";
        for (size_t i = 0; i < v.size(); ++i) out_ << (i ? ", " : "") << fmt(v[i]);
        out_ << "\n";
    }
    void blank() { out_ << "\n"; }
    std::string str() const { return out_.str(); }

  private:
    static std::string fmt(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return buf;
    }
    static std::string fmt(int v) { return std::to_string(v); }
    static std::string fmt(bool v) { return v ? "true" : "false"; }
    static std::string fmt(const std::string& v) { return v; }
    std::ostringstream out_;
};

}  // namespace

std::string serialize_config(const RunConfig& c) {
    Emitter e;
    e.section("circuit");
    e.key("i0_na", c.circuit.i0_na);
    e.key("f1_ghz", c.circuit.f1_ghz);
    e.key("fr_ghz", c.circuit.fr_ghz);
    e.key("z0_ohm", c.circuit.z0_ohm);
    e.key("k_khz", c.circuit.k_khz);
    e.key("kp_khz", c.circuit.kp_khz);
    e.key("kappa_mhz", c.circuit.kappa_mhz);
    e.key("q", c.circuit.q);
    e.key("temperature_mk", c.circuit.temperature_mk);
    if (c.transmon) {
        e.blank();
        e.section("transmon");
        e.key("ej_ghz", c.transmon->ej_ghz);
        e.key("ec_ghz", c.transmon->ec_ghz);
        e.key("f01_ghz", c.transmon->f01_ghz);
        e.key("anharmonicity_mhz", c.transmon->anharmonicity_mhz);
        e.key("ng", c.transmon->ng);
        e.key("flux_ratio", c.transmon->flux_ratio);
        e.key("levels", c.transmon->levels);
        e.key("n_cutoff", c.transmon->n_cutoff);
        e.key("t1_us", c.transmon->t1_us);
        e.key("tphi_us", c.transmon->tphi_us);
    }
    e.blank();
    e.section("coupling");
    e.key("g_mhz", c.coupling.g_mhz);
    e.key("beta", c.coupling.beta);
    e.blank();
    e.section("pulse");
    e.key("t_rise_ns", c.pulse.t_rise_ns);
    e.key("t_measure_ns", c.pulse.t_measure_ns);
    e.key("t_fall_ns", c.pulse.t_fall_ns);
    e.key("t_hold_ns", c.pulse.t_hold_ns);
    e.key("eps_measure_mhz", c.pulse.eps_measure_mhz);
    e.key("p_measure_dbm", c.pulse.p_measure_dbm);
    e.key("eps_hold_mhz", c.pulse.eps_hold_mhz);
    e.key("p_hold_dbm", c.pulse.p_hold_dbm);
    e.key("hold_fraction", c.pulse.hold_fraction);
    e.blank();
    e.section("sweep");
    e.key("points", c.sweep.points);
    e.key("eps_from_mhz", c.sweep.eps_from_mhz);
    e.key("eps_to_mhz", c.sweep.eps_to_mhz);
    e.key("p_from_dbm", c.sweep.p_from_dbm);
    e.key("p_to_dbm", c.sweep.p_to_dbm);
    e.key("f_s_from_ghz", c.sweep.f_s_from_ghz);
    e.key("f_s_to_ghz", c.sweep.f_s_to_ghz);
    e.key("t_from_ns", c.sweep.t_from_ns);
    e.key("t_to_ns", c.sweep.t_to_ns);
    e.list("temperatures_mk", c.sweep.temperatures_mk);
    e.list("omegas", c.sweep.omegas);
    e.blank();
    e.section("experiment");
    e.key("omega_reduced", c.experiment.omega_reduced);
    e.key("f_m_ghz", c.experiment.f_m_ghz);
    e.key("prep", c.experiment.prep);
    e.key("shelving", c.experiment.shelving);
    e.key("attenuation_db", c.experiment.attenuation_db);
    e.key("branch", c.experiment.branch);
    e.key("equilibration", c.experiment.equilibration);
    e.key("window_us", c.experiment.window_us);
    e.key("eps_p_mhz", c.experiment.eps_p_mhz);
    e.key("p_p_dbm", c.experiment.p_p_dbm);
    e.key("eps_s_mhz", c.experiment.eps_s_mhz);
    e.key("f_s_ghz", c.experiment.f_s_ghz);
    e.key("gamma2_guess_mhz", c.experiment.gamma2_guess_mhz);
    e.key("ideal_readout", c.experiment.ideal_readout);
    e.blank();
    e.section("numerics");
    e.key("n_fock", c.numerics.n_fock);
    e.key("dt_scale", c.numerics.dt_scale);
    e.key("dt_ps", c.numerics.dt_ps);
    e.key("fock_tail_tol", c.numerics.fock_tail_tol);
    e.key("trace_tol", c.numerics.trace_tol);
    e.key("workers", c.numerics.workers);
    e.key("grid_step", c.numerics.grid_step);
    return e.str();
}

KerrParameters build_kerr(const CircuitSection& circuit) {
    const double temperature = units::mk_to_k(circuit.temperature_mk);
    if (circuit.i0_na) {
        JunctionResonatorSpec spec;
        spec.i0 = *circuit.i0_na * 1e-9;
        spec.z0 = circuit.z0_ohm.value_or(50.0);
        if (!circuit.q) throw std::invalid_argument("[circuit]: q is required");
        spec.q_factor = *circuit.q;
        spec.temperature = temperature;
        if (circuit.f1_ghz)
            spec.omega1 = units::ghz_to_rad(*circuit.f1_ghz);
        else if (circuit.fr_ghz)
            spec.omega1 = omega1_for_fundamental(units::ghz_to_rad(*circuit.fr_ghz), spec.i0, spec.z0);
        else
            throw std::invalid_argument("[circuit]: derived mode needs f1_ghz or fr_ghz");
        return derive_equivalent_circuit(spec);
    }
    if (!circuit.k_khz || !circuit.fr_ghz)
        throw std::invalid_argument("[circuit]: direct mode needs fr_ghz and k_khz");
    KerrParameters kerr;
    kerr.omega_r = units::ghz_to_rad(*circuit.fr_ghz);
    kerr.K = units::khz_to_rad(*circuit.k_khz);
    kerr.Kp = circuit.kp_khz ? units::khz_to_rad(*circuit.kp_khz) : 0.0;
    if (circuit.kappa_mhz)
        kerr.kappa = units::mhz_to_rad(*circuit.kappa_mhz);
    else if (circuit.q)
        kerr.kappa = kerr.omega_r / *circuit.q;
    else
        throw std::invalid_argument("[circuit]: direct mode needs kappa_mhz or q");
    kerr.z0 = circuit.z0_ohm.value_or(50.0);
    kerr.n_th = thermal_photons(kerr.omega_r, temperature);
    return kerr;
}

SystemModel build_system_model(const RunConfig& config) {
    SystemModel model;
    model.kerr = build_kerr(config.circuit);
    if (!config.transmon) return model;

    const TransmonSection& t = *config.transmon;
    TransmonSpec spec;
    if (t.ej_ghz && t.ec_ghz) {
        spec.ej0 = units::ghz_to_rad(*t.ej_ghz);
        spec.ec = units::ghz_to_rad(*t.ec_ghz);
        spec.ng = t.ng;
        spec.flux_ratio = t.flux_ratio;
        spec.n_charge_cutoff = t.n_cutoff;
        spec.m_levels = t.levels;
    } else if (t.f01_ghz && t.anharmonicity_mhz) {
        spec = fit_transmon_from_frequencies(units::ghz_to_rad(*t.f01_ghz),
                                             units::mhz_to_rad(*t.anharmonicity_mhz), t.ng,
                                             t.n_cutoff, t.levels);
    } else {
        throw std::invalid_argument("[transmon]: needs ej_ghz/ec_ghz or f01_ghz/anharmonicity_mhz");
    }
    model.transmon = diagonalize_cpb(spec);

    const auto& spectrum = *model.transmon;
    if (config.coupling.g_mhz) {
        const double g01 = units::mhz_to_rad(*config.coupling.g_mhz);
        const double ratio0 = spectrum.n_matrix(0, 1);
        for (int i = 0; i + 1 < spectrum.levels(); ++i)
            model.g.push_back(g01 * spectrum.n_matrix(i, i + 1) / ratio0);
    } else if (config.coupling.beta) {
        model.g = coupling_constants(spectrum, *config.coupling.beta,
                                     vacuum_voltage(model.kerr.omega_r, model.kerr.z0));
    } else {
        throw std::invalid_argument("[coupling]: needs g_mhz or beta");
    }

    double gamma = 0.0, gamma_phi = 0.0;
    if (t.t1_us) gamma = 1.0 / units::us(*t.t1_us);
    if (t.tphi_us) gamma_phi = 1.0 / units::us(*t.tphi_us);
    model.dissipation = QubitDissipation::flat(gamma, gamma_phi, spectrum.levels());
    return model;
}

NumericsOptions build_numerics(const NumericsSection& numerics) {
    NumericsOptions n;
    n.n_fock = numerics.n_fock;
    n.dt = numerics.dt_ps ? *numerics.dt_ps * 1e-12 : 0.0;
    n.dt_scale = numerics.dt_scale;
    n.fock_tail_tol = numerics.fock_tail_tol;
    n.trace_tol = numerics.trace_tol;
    n.workers = numerics.workers;
    n.grid_step = numerics.grid_step;
    return n;
}

PulseProfile build_pulse(const RunConfig& config, const KerrParameters& kerr,
                         double omega_reduced) {
    const PulseSection& p = config.pulse;
    const double omega_p = pump_frequency(omega_reduced, kerr);
    const double atten = config.experiment.attenuation_db;

    PulseProfile pulse;
    pulse.t_rise = units::ns(p.t_rise_ns);
    pulse.t_measure = units::ns(p.t_measure_ns);
    pulse.t_fall = units::ns(p.t_fall_ns);
    pulse.t_hold = units::ns(p.t_hold_ns);

    if (p.eps_measure_mhz)
        pulse.eps_measure = units::mhz_to_rad(*p.eps_measure_mhz);
    else if (p.p_measure_dbm)
        pulse.eps_measure = units::epsilon_from_dbm(*p.p_measure_dbm, atten, kerr.kappa, omega_p);

    if (p.eps_hold_mhz) {
        pulse.eps_hold = units::mhz_to_rad(*p.eps_hold_mhz);
    } else if (p.p_hold_dbm) {
        pulse.eps_hold = units::epsilon_from_dbm(*p.p_hold_dbm, atten, kerr.kappa, omega_p);
    } else if (p.hold_fraction) {
        const auto window = bifurcation_thresholds(omega_reduced, kerr);
        if (!window)
            throw std::invalid_argument("pulse.hold_fraction: no bistable window at this detuning");
        pulse.eps_hold = *p.hold_fraction * window->second;
    } else {
        throw std::invalid_argument("[pulse]: hold amplitude missing");
    }
    return pulse;
}

std::vector<double> sweep_amplitudes(const RunConfig& config, const KerrParameters& kerr,
                                     double omega_reduced) {
    const SweepSection& s = config.sweep;
    if (s.points < 2) throw std::invalid_argument("[sweep]: points must be >= 2");
    std::vector<double> eps;
    if (s.eps_from_mhz && s.eps_to_mhz) {
        const double a = units::mhz_to_rad(*s.eps_from_mhz), b = units::mhz_to_rad(*s.eps_to_mhz);
        for (int i = 0; i < s.points; ++i) eps.push_back(a + (b - a) * i / (s.points - 1));
    } else if (s.p_from_dbm && s.p_to_dbm) {
        const double omega_p = pump_frequency(omega_reduced, kerr);
        for (int i = 0; i < s.points; ++i) {
            const double dbm = *s.p_from_dbm + (*s.p_to_dbm - *s.p_from_dbm) * i / (s.points - 1);
            eps.push_back(units::epsilon_from_dbm(dbm, config.experiment.attenuation_db,
                                                  kerr.kappa, omega_p));
        }
    } else {
        throw std::invalid_argument("[sweep]: needs eps_from/to_mhz or p_from/to_dbm");
    }
    return eps;
}

}  // namespace kerrsim
