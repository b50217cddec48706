#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kerrsim/backaction.hpp"
#include "kerrsim/config.hpp"
#include "kerrsim/csv.hpp"
#include "kerrsim/experiments.hpp"
#include "kerrsim/units.hpp"
#include "kerrsim/version.hpp"

namespace fs = std::filesystem;
using namespace kerrsim;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    int workers = 0;   // 0: take from config
    long seed = 0;     // echoed into outputs; the engine itself is deterministic
    bool plot = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void echo_config(CsvWriter& csv, const RunConfig& config, const CliOptions& cli) {
    csv.comment(std::string("kerrsim ") + kVersion);
    csv.comment("seed " + std::to_string(cli.seed));
    std::istringstream ss(serialize_config(config));
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) csv.comment(line);
}

double require_omega(const RunConfig& config, const KerrParameters& kerr) {
    if (config.experiment.omega_reduced) return *config.experiment.omega_reduced;
    if (config.experiment.f_m_ghz)
        return reduced_detuning(units::ghz_to_rad(*config.experiment.f_m_ghz), kerr);
    throw std::invalid_argument("[experiment]: omega_reduced or f_m_ghz required");
}

double pump_amplitude(const RunConfig& config, const KerrParameters& kerr, double omega_reduced) {
    if (config.experiment.eps_p_mhz) return units::mhz_to_rad(*config.experiment.eps_p_mhz);
    if (config.experiment.p_p_dbm)
        return units::epsilon_from_dbm(*config.experiment.p_p_dbm,
                                       config.experiment.attenuation_db, kerr.kappa,
                                       pump_frequency(omega_reduced, kerr));
    throw std::invalid_argument("[experiment]: eps_p_mhz or p_p_dbm required");
}

void emit_plot_script(const fs::path& dir, const std::string& name,
                      const std::vector<std::string>& csvs, const std::string& ylabel) {
    std::ofstream gp(dir / (name + ".gp"));
    gp << "set datafile separator ','\n";
    gp << "set key autotitle columnhead\n";
    gp << "set ylabel '" << ylabel << "'\n";
    gp << "plot ";
    for (size_t i = 0; i < csvs.size(); ++i)
        gp << (i ? ", " : "") << "'" << csvs[i] << "' using 1:3 with linespoints";
    gp << "\n";
}

int cmd_circuit_params(const RunConfig& config, const CliOptions& cli) {
    const KerrParameters kerr = build_kerr(config.circuit);
    std::cout << "omega_r/2pi = " << units::rad_to_ghz(kerr.omega_r) << " GHz\n"
              << "K/2pi       = " << units::rad_to_khz(kerr.K) << " kHz\n"
              << "K'/2pi      = " << units::rad_to_khz(kerr.Kp) << " kHz\n"
              << "kappa/2pi   = " << units::rad_to_mhz(kerr.kappa) << " MHz\n"
              << "p           = " << kerr.p << "\n"
              << "L_J         = " << kerr.L_J * 1e9 << " nH\n"
              << "L_e         = " << kerr.L_e * 1e9 << " nH\n"
              << "C_e         = " << kerr.C_e * 1e15 << " fF\n"
              << "Z_e         = " << kerr.Z_e << " Ohm\n"
              << "n_th        = " << kerr.n_th << "\n";

    CsvWriter csv((fs::path(cli.out_dir) / "circuit_params.csv").string());
    echo_config(csv, config, cli);
    csv.header({"omega_r_ghz", "k_khz", "kp_khz", "kappa_mhz", "p", "l_j_nh", "l_e_nh", "c_e_ff",
                "z_e_ohm", "n_th"});
    csv.row({units::rad_to_ghz(kerr.omega_r), units::rad_to_khz(kerr.K), units::rad_to_khz(kerr.Kp),
             units::rad_to_mhz(kerr.kappa), kerr.p, kerr.L_J * 1e9, kerr.L_e * 1e9, kerr.C_e * 1e15,
             kerr.Z_e, kerr.n_th});
    return 0;
}

int cmd_stability_diagram(const RunConfig& config, const CliOptions& cli) {
    const KerrParameters kerr = build_kerr(config.circuit);
    std::vector<double> omegas = config.sweep.omegas;
    if (omegas.empty()) omegas = {require_omega(config, kerr)};

    CsvWriter csv((fs::path(cli.out_dir) / "stability_diagram.csv").string());
    echo_config(csv, config, cli);
    csv.header({"omega_reduced", "power_dbm", "n_roots", "n_low", "n_high", "region"});

    for (double omega : omegas) {
        const auto eps_list = sweep_amplitudes(config, kerr, omega);
        const auto window = bifurcation_thresholds(omega, kerr);
        const double omega_p = pump_frequency(omega, kerr);
        for (double eps : eps_list) {
            const auto sols = steady_states(omega, eps, kerr);
            std::string region = "mono-L";
            if (window && eps > window->second)
                region = "mono-H";
            else if (window && eps >= window->first && sols.size() > 1)
                region = "bistable";
            csv.row_mixed({CsvWriter::format(omega),
                           CsvWriter::format(units::dbm_from_epsilon(
                               eps, config.experiment.attenuation_db, kerr.kappa, omega_p)),
                           std::to_string(sols.size()), CsvWriter::format(sols.front().n),
                           CsvWriter::format(sols.back().n), region});
        }
    }
    return 0;
}

int cmd_scurve(const RunConfig& config, const CliOptions& cli) {
    const SystemModel model = build_system_model(config);
    NumericsOptions numerics = build_numerics(config.numerics);
    if (cli.workers > 0) numerics.workers = cli.workers;

    std::vector<double> omegas = config.sweep.omegas;
    if (omegas.empty()) omegas = {require_omega(config, model.kerr)};
    const double temperature = units::mk_to_k(config.circuit.temperature_mk);

    std::vector<std::string> files;
    for (size_t i = 0; i < omegas.size(); ++i) {
        const double omega = omegas[i];
        const PulseProfile pulse = build_pulse(config, model.kerr, omega);
        const auto eps_list = sweep_amplitudes(config, model.kerr, omega);
        std::optional<int> prep;
        if (model.transmon) prep = config.experiment.prep;
        const SCurve curve = run_scurve(model, pulse, omega, eps_list, prep, temperature, numerics);

        const std::string name = "scurve_" + std::to_string(i) + ".csv";
        CsvWriter csv((fs::path(cli.out_dir) / name).string());
        echo_config(csv, config, cli);
        csv.comment("omega_reduced " + CsvWriter::format(omega));
        csv.header({"eps_mhz", "power_dbm", "p_s", "p_s_hold_start"});
        const double omega_p = pump_frequency(omega, model.kerr);
        for (const auto& pt : curve.points)
            csv.row({units::rad_to_mhz(pt.eps_m),
                     units::dbm_from_epsilon(pt.eps_m, config.experiment.attenuation_db,
                                             model.kerr.kappa, omega_p),
                     pt.p_s, pt.p_s_hold_start});
        files.push_back(name);
    }
    if (cli.plot) emit_plot_script(cli.out_dir, "scurve", files, "p_s");
    return 0;
}

int cmd_readout(const RunConfig& config, const CliOptions& cli) {
    const SystemModel model = build_system_model(config);
    NumericsOptions numerics = build_numerics(config.numerics);
    if (cli.workers > 0) numerics.workers = cli.workers;

    const double omega = require_omega(config, model.kerr);
    const PulseProfile pulse = build_pulse(config, model.kerr, omega);
    const auto eps_list = sweep_amplitudes(config, model.kerr, omega);

    const ContrastResult result = readout_contrast(model, pulse, omega, eps_list,
                                                   config.experiment.shelving, numerics);

    CsvWriter csv((fs::path(cli.out_dir) / "readout.csv").string());
    echo_config(csv, config, cli);
    csv.comment("best_contrast " + CsvWriter::format(result.best_contrast));
    csv.comment("best_eps_mhz " + CsvWriter::format(units::rad_to_mhz(result.best_eps)));
    csv.header({"eps_mhz", "p_s_ground", "p_s_excited", "contrast"});
    for (size_t i = 0; i < eps_list.size(); ++i)
        csv.row({units::rad_to_mhz(eps_list[i]), result.curve_ground.points[i].p_s,
                 result.curve_excited.points[i].p_s,
                 result.curve_excited.points[i].p_s - result.curve_ground.points[i].p_s});
    std::cout << "best contrast " << result.best_contrast << " at eps/2pi = "
              << units::rad_to_mhz(result.best_eps) << " MHz\n";
    if (cli.plot) emit_plot_script(cli.out_dir, "readout", {"readout.csv"}, "p_s");
    return 0;
}

int cmd_spectroscopy(const RunConfig& config, const CliOptions& cli) {
    const SystemModel model = build_system_model(config);
    NumericsOptions numerics = build_numerics(config.numerics);
    if (cli.workers > 0) numerics.workers = cli.workers;

    if (!config.sweep.f_s_from_ghz || !config.sweep.f_s_to_ghz)
        throw std::invalid_argument("[sweep]: spectroscopy needs f_s_from_ghz / f_s_to_ghz");
    std::vector<double> omega_s;
    for (int i = 0; i < config.sweep.points; ++i) {
        const double f = *config.sweep.f_s_from_ghz +
                         (*config.sweep.f_s_to_ghz - *config.sweep.f_s_from_ghz) * i /
                             (config.sweep.points - 1);
        omega_s.push_back(units::ghz_to_rad(f));
    }

    SpectroscopyConfig sc;
    sc.omega_reduced = require_omega(config, model.kerr);
    sc.eps_p = pump_amplitude(config, model.kerr, sc.omega_reduced);
    if (!config.experiment.eps_s_mhz)
        throw std::invalid_argument("[experiment]: eps_s_mhz required for spectroscopy");
    sc.eps_s = units::mhz_to_rad(*config.experiment.eps_s_mhz);
    sc.equilibration = config.experiment.equilibration;
    if (config.experiment.window_us) sc.window = units::us(*config.experiment.window_us);
    if (config.experiment.gamma2_guess_mhz)
        sc.gamma2_guess = units::mhz_to_rad(*config.experiment.gamma2_guess_mhz);
    sc.branch = config.experiment.branch == "H" ? Branch::H : Branch::L;

    const SpectroscopyLine line = pumped_spectroscopy(model, sc, omega_s, numerics);

    CsvWriter csv((fs::path(cli.out_dir) / "spectroscopy.csv").string());
    echo_config(csv, config, cli);
    csv.comment("fit_center_ghz " + CsvWriter::format(units::rad_to_ghz(line.fit.center)));
    csv.comment("fit_fwhm_mhz " + CsvWriter::format(units::rad_to_mhz(line.fwhm)));
    csv.comment("gamma2_mhz " + CsvWriter::format(units::rad_to_mhz(line.gamma2)));
    csv.comment("stark_shift_mhz " + CsvWriter::format(units::rad_to_mhz(line.delta_omega01)));
    csv.comment(std::string("lorentzian_ok ") + (line.lorentzian_ok ? "1" : "0"));
    csv.header({"f_s_ghz", "p_e"});
    for (const auto& pt : line.points)
        csv.row({units::rad_to_ghz(pt.omega_s), pt.p_e});
    if (cli.plot) emit_plot_script(cli.out_dir, "spectroscopy", {"spectroscopy.csv"}, "p_e");
    return 0;
}

int cmd_rabi(const RunConfig& config, const CliOptions& cli) {
    const SystemModel model = build_system_model(config);
    NumericsOptions numerics = build_numerics(config.numerics);
    if (cli.workers > 0) numerics.workers = cli.workers;

    if (!config.sweep.t_from_ns || !config.sweep.t_to_ns)
        throw std::invalid_argument("[sweep]: rabi needs t_from_ns / t_to_ns");
    if (!config.experiment.eps_s_mhz || !config.experiment.f_s_ghz)
        throw std::invalid_argument("[experiment]: rabi needs eps_s_mhz and f_s_ghz");

    std::vector<double> durations;
    for (int i = 0; i < config.sweep.points; ++i)
        durations.push_back(units::ns(*config.sweep.t_from_ns +
                                      (*config.sweep.t_to_ns - *config.sweep.t_from_ns) * i /
                                          (config.sweep.points - 1)));

    const RabiResult result =
        rabi_experiment(model, units::mhz_to_rad(*config.experiment.eps_s_mhz),
                        units::ghz_to_rad(*config.experiment.f_s_ghz), durations, numerics);

    CsvWriter csv((fs::path(cli.out_dir) / "rabi.csv").string());
    echo_config(csv, config, cli);
    csv.comment("rabi_freq_mhz " + CsvWriter::format(result.fit.frequency / 1e6));
    csv.comment("decay_us " + CsvWriter::format(result.fit.decay * 1e6));
    csv.comment("amplitude " + CsvWriter::format(result.fit.amplitude));
    csv.header({"t_ns", "p_e"});
    for (const auto& pt : result.points) csv.row({units::s_to_ns(pt.duration), pt.p_e});
    if (cli.plot) emit_plot_script(cli.out_dir, "rabi", {"rabi.csv"}, "p_e");
    return 0;
}

int cmd_backaction(const RunConfig& config, const CliOptions& cli) {
    const SystemModel model = build_system_model(config);
    if (!model.transmon) throw std::invalid_argument("backaction needs a [transmon] section");

    const double omega = require_omega(config, model.kerr);
    const double omega_p = pump_frequency(omega, model.kerr);
    const auto eps_list = sweep_amplitudes(config, model.kerr, omega);
    const auto constants = dispersive_constants(*model.transmon, model.g, omega_p);

    CsvWriter csv((fs::path(cli.out_dir) / "backaction.csv").string());
    echo_config(csv, config, cli);
    csv.header({"power_dbm", "n0", "n1", "d", "stark_mhz", "gamma_phi_mhz", "gamma_up_mhz",
                "gamma_down_mhz", "gain", "validity_flag"});

    for (double eps : eps_list) {
        const auto pointer = pointer_states(constants, model.kerr, omega_p, eps, 0.0, 0.0);
        const auto shifts = stark_lamb_shifts(constants, pointer, model.kerr);
        const auto ba = rates(constants, pointer, shifts, model.kerr, model.dissipation);
        const auto gain = small_signal_gain(omega, eps, model.kerr,
                                            pointer.branch[0] == Branch::H ? Branch::H : Branch::L);
        const double stark =
            (shifts.omega_ppp[1] - shifts.omega_ppp[0]) - (constants.omega(1) - constants.omega(0));
        csv.row({units::dbm_from_epsilon(eps, config.experiment.attenuation_db, model.kerr.kappa,
                                         omega_p),
                 std::norm(pointer.alpha_p[0]), std::norm(pointer.alpha_p[1]),
                 pointer.distinguishability, units::rad_to_mhz(stark),
                 units::rad_to_mhz(ba.gamma_phi_tp), units::rad_to_mhz(ba.gamma_up),
                 units::rad_to_mhz(ba.gamma_down), gain.diverged ? -1.0 : gain.gain,
                 ba.valid ? 1.0 : 0.0});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven Kerr resonator + transmon simulation engine"};
    app.set_version_flag("--version", kVersion);

    CliOptions cli;
    app.add_option("--config", cli.config_path, "configuration file")->required();
    app.add_option("--out", cli.out_dir, "output directory");
    app.add_option("--workers", cli.workers, "worker threads (overrides [numerics])");
    app.add_option("--seed", cli.seed, "seed echoed into outputs");
    app.add_flag("--plot", cli.plot, "emit a gnuplot script next to the CSVs");

    int (*handler)(const RunConfig&, const CliOptions&) = nullptr;
    app.add_subcommand("circuit-params", "derived Kerr-oscillator constants")
        ->callback([&]() { handler = cmd_circuit_params; });
    app.add_subcommand("stability-diagram", "root counts over the (Omega, power) plane")
        ->callback([&]() { handler = cmd_stability_diagram; });
    app.add_subcommand("scurve", "switching probability vs drive power")
        ->callback([&]() { handler = cmd_scurve; });
    app.add_subcommand("readout", "qubit readout contrast")
        ->callback([&]() { handler = cmd_readout; });
    app.add_subcommand("spectroscopy", "qubit line under a stationary pump")
        ->callback([&]() { handler = cmd_spectroscopy; });
    app.add_subcommand("rabi", "driven qubit oscillations")
        ->callback([&]() { handler = cmd_rabi; });
    app.add_subcommand("backaction", "pointer states and analytic rates vs pump power")
        ->callback([&]() { handler = cmd_backaction; });
    app.require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig config = parse_config(read_file(cli.config_path));
        fs::create_directories(cli.out_dir);
        return handler(config, cli);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
