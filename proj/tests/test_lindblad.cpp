#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kerrsim/lindblad.hpp"
#include "kerrsim/pulse.hpp"
#include "kerrsim/units.hpp"

using namespace kerrsim;

namespace {

KerrParameters bare_resonator(double kappa_mhz = 5.0, double k_mhz = 0.0) {
    KerrParameters kerr;
    kerr.omega_r = units::ghz_to_rad(6.4535);
    kerr.kappa = units::mhz_to_rad(kappa_mhz);
    kerr.K = units::mhz_to_rad(k_mhz);
    return kerr;
}

Matrix random_density(int dim, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    Matrix g(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = cplx(dist(rng), dist(rng));
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

}  // namespace

TEST_CASE("static Hamiltonian: trivial and Kerr-diagonal cases") {
    const KerrParameters kerr = bare_resonator(5.0, 0.0);
    HilbertConfig hc{6, 1, RotatingFrame::pump(kerr.omega_r)};
    auto h = build_static_hamiltonian(kerr, nullptr, {}, hc);
    CHECK(h.m.cwiseAbs().maxCoeff() == 0.0);

    KerrParameters nl = bare_resonator(5.0, -0.5);
    nl.Kp = units::khz_to_rad(-3.0);
    HilbertConfig hc2{10, 1, RotatingFrame::pump(nl.omega_r - 2.0 * nl.kappa)};
    auto h2 = build_static_hamiltonian(nl, nullptr, {}, hc2);
    const double w_res = nl.omega_r - hc2.frame.omega_res;  // frame subtraction as built
    for (int n = 0; n < guard_band_start(10); ++n) {
        const double expected = w_res * n + 0.5 * nl.K * n * (n - 1.0) +
                                nl.Kp / 3.0 * n * (n - 1.0) * (n - 2.0);
        CHECK(h2.m(n, n).real() == doctest::Approx(expected).epsilon(1e-14));
    }
    // detuning diagonal frozen over the guard band
    CHECK(h2.m(9, 9).real() == doctest::Approx(h2.m(guard_band_start(10), guard_band_start(10)).real()));
    CHECK(is_hermitian(h2.m));
}

TEST_CASE("dressed one-excitation splitting vs exact block diagonalization") {
    const KerrParameters kerr = bare_resonator(5.0, 0.0);
    const double g = units::mhz_to_rad(44.0);
    const double delta = units::mhz_to_rad(-380.0);

    TransmonSpectrum spectrum;
    spectrum.omega = Eigen::VectorXd::Zero(2);
    spectrum.omega(1) = kerr.omega_r + delta;
    spectrum.n_matrix = Eigen::MatrixXd::Zero(2, 2);
    spectrum.n_matrix(0, 1) = spectrum.n_matrix(1, 0) = 1.0;

    HilbertConfig hc{5, 2, RotatingFrame::pump(kerr.omega_r)};
    auto h = build_static_hamiltonian(kerr, &spectrum, {g}, hc);
    CHECK(is_hermitian(h.m));
    // block over {(0,1), (1,0)}
    CHECK(h.m(hc.index(0, 1), hc.index(0, 1)).real() == doctest::Approx(delta));
    CHECK(h.m(hc.index(1, 0), hc.index(0, 1)).real() == doctest::Approx(g));

    Eigen::Matrix2cd block;
    block << 0.0, g, g, delta;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
    const double qubit_like = delta < 0 ? es.eigenvalues()(0) : es.eigenvalues()(1);
    const double chi_exact = qubit_like - delta;
    const double chi_dispersive = g * g / delta;
    CHECK(std::abs(chi_exact - chi_dispersive) <
          3.0 * std::pow(std::abs(g), 4) / std::pow(std::abs(delta), 3));
}

TEST_CASE("frame rules") {
    const KerrParameters kerr = bare_resonator();
    TransmonSpectrum spectrum;
    spectrum.omega = Eigen::VectorXd::Zero(2);
    spectrum.omega(1) = kerr.omega_r - units::mhz_to_rad(300.0);
    spectrum.n_matrix = Eigen::MatrixXd::Identity(2, 2);

    HilbertConfig mismatched{5, 2, RotatingFrame{kerr.omega_r, kerr.omega_r - 1e7}};
    CHECK_THROWS_AS(build_static_hamiltonian(kerr, &spectrum, {1e6}, mismatched),
                    std::domain_error);
    // uncoupled system tolerates distinct frame frequencies
    CHECK_NOTHROW(build_static_hamiltonian(kerr, &spectrum, {0.0}, mismatched));
}

TEST_CASE("collapse operator structure") {
    KerrParameters kerr = bare_resonator();
    HilbertConfig hc{5, 3, RotatingFrame::pump(kerr.omega_r)};

    SUBCASE("zero temperature has no upward resonator channel") {
        const auto ops = collapse_operators(kerr, QubitDissipation{}, hc);
        REQUIRE(ops.size() == 1);
        CHECK(ops[0].m(hc.index(0, 0), hc.index(1, 0)).real() ==
              doctest::Approx(std::sqrt(kerr.kappa)));
    }
    SUBCASE("thermal occupation adds the a^dag channel") {
        kerr.n_th = 0.4;
        const auto ops = collapse_operators(kerr, QubitDissipation{}, hc);
        REQUIRE(ops.size() == 2);
        CHECK(ops[1].m(hc.index(1, 0), hc.index(0, 0)).real() ==
              doctest::Approx(std::sqrt(kerr.kappa * 0.4)));
    }
    SUBCASE("multilevel relaxation rates follow (i+1) gamma") {
        const double gamma = 2e5;
        const auto ops = collapse_operators(kerr, QubitDissipation::flat(gamma, 0.0, 3), hc);
        REQUIRE(ops.size() == 3);  // a, |0><1|, |1><2|
        CHECK(ops[1].m(hc.index(0, 0), hc.index(0, 1)).real() ==
              doctest::Approx(std::sqrt(gamma)));
        CHECK(ops[2].m(hc.index(0, 1), hc.index(0, 2)).real() ==
              doctest::Approx(std::sqrt(2.0 * gamma)));
    }
    SUBCASE("dephasing operators carry sqrt(2 gamma_phi)") {
        const auto ops = collapse_operators(kerr, QubitDissipation::flat(0.0, 3e4, 3), hc);
        REQUIRE(ops.size() == 3);  // a, |0><0|, |1><1|
        CHECK(ops[1].m(hc.index(0, 0), hc.index(0, 0)).real() ==
              doctest::Approx(std::sqrt(2.0 * 3e4)));
    }
}

TEST_CASE("free decay of a Fock state") {
    const KerrParameters kerr = bare_resonator();
    HilbertConfig hc{6, 1, RotatingFrame::pump(kerr.omega_r)};
    auto ham = make_hamiltonian(build_static_hamiltonian(kerr, nullptr, {}, hc));
    const auto collapse = collapse_operators(kerr, QubitDissipation{}, hc);

    EvolveOptions opts;
    opts.dt = 0.002 / kerr.kappa;
    const std::vector<double> t_grid = {0.0, 1.0 / kerr.kappa, 3.0 / kerr.kappa};
    const auto result = evolve(fock_state(hc, 1), ham, collapse, t_grid, opts);
    CHECK(mean_photon_number(result.states[1]) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(mean_photon_number(result.states[2]) == doctest::Approx(std::exp(-3.0)).epsilon(1e-6));
    CHECK(result.diag.max_trace_drift < 1e-10);
}

TEST_CASE("thermal fixed point") {
    for (double n_th : {0.1, 0.5, 1.0}) {
        KerrParameters kerr = bare_resonator();
        kerr.n_th = n_th;
        HilbertConfig hc{25, 1, RotatingFrame::pump(kerr.omega_r)};
        auto ham = make_hamiltonian(build_static_hamiltonian(kerr, nullptr, {}, hc));
        const auto collapse = collapse_operators(kerr, QubitDissipation{}, hc);
        const auto result =
            evolve(vacuum_state(hc), ham, collapse, {0.0, 20.0 / kerr.kappa}, {});
        CHECK(std::abs(mean_photon_number(result.states[1]) - n_th) < 1e-3);
        const auto check = check_density_matrix(result.states[1]);
        CHECK(check.ok());
    }
}

TEST_CASE("driven linear cavity matches the analytic transient") {
    const KerrParameters kerr = bare_resonator();
    const double delta = 0.7 * kerr.kappa;          // omega_r - omega_p
    const double omega_p = kerr.omega_r - delta;
    const double eps = 0.9 * kerr.kappa;

    HilbertConfig hc{18, 1, RotatingFrame::pump(omega_p)};
    auto ham = make_hamiltonian(build_static_hamiltonian(kerr, nullptr, {}, hc));
    add_drive(ham, {omega_p, eps, DriveSpec::Label::Pump});
    const auto collapse = collapse_operators(kerr, QubitDissipation{}, hc);

    EvolveOptions opts;
    opts.dt = 0.002 / kerr.kappa;
    const double t_end = 20.0 / kerr.kappa;
    const auto result = evolve(vacuum_state(hc), ham, collapse, {0.0, t_end}, opts);

    const cplx alpha_ss = -eps / cplx(delta, -0.5 * kerr.kappa);
    const cplx decay = std::exp(-(cplx(0.0, delta) + 0.5 * kerr.kappa) * t_end);
    const cplx alpha_t = alpha_ss * (1.0 - decay);
    CHECK(std::abs(mean_field(result.states[1]) - alpha_t) / std::abs(alpha_ss) < 1e-6);
}

TEST_CASE("pure dephasing keeps populations and damps coherence") {
    const KerrParameters kerr = bare_resonator(5.0, 0.0);
    const double gamma_phi = units::mhz_to_rad(0.2);
    TransmonSpectrum spectrum;
    spectrum.omega = Eigen::VectorXd::Zero(2);
    spectrum.omega(1) = kerr.omega_r;  // frame removes it
    spectrum.n_matrix = Eigen::MatrixXd::Identity(2, 2);

    HilbertConfig hc{4, 2, RotatingFrame::pump(kerr.omega_r)};
    KerrParameters lossless = kerr;
    lossless.kappa = 0.0;
    auto ham = make_hamiltonian(build_static_hamiltonian(lossless, &spectrum, {0.0}, hc));
    const auto collapse =
        collapse_operators(lossless, QubitDissipation::flat(0.0, gamma_phi, 2), hc);

    DensityMatrix rho0 = vacuum_state(hc, 0);
    rho0.rho.setZero();
    rho0.rho(hc.index(0, 0), hc.index(0, 0)) = 0.5;
    rho0.rho(hc.index(0, 1), hc.index(0, 1)) = 0.5;
    rho0.rho(hc.index(0, 0), hc.index(0, 1)) = 0.5;
    rho0.rho(hc.index(0, 1), hc.index(0, 0)) = 0.5;

    const double t_end = 2.0 / gamma_phi;
    EvolveOptions opts;
    opts.dt = 1e-3 / gamma_phi;
    const auto result = evolve(rho0, ham, collapse, {0.0, t_end}, opts);
    CHECK(qubit_population(result.states[1], 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(qubit_population(result.states[1], 1) == doctest::Approx(0.5).epsilon(1e-12));
    const double coh = std::abs(result.states[1].rho(hc.index(0, 0), hc.index(0, 1)));
    CHECK(coh == doctest::Approx(0.5 * std::exp(-gamma_phi * t_end)).epsilon(1e-6));
}

TEST_CASE("trace is conserved for random dense generators") {
    std::mt19937 rng(21);
    const int dim = 12;
    HilbertConfig hc{4, 3, RotatingFrame::lab()};
    std::normal_distribution<double> dist;

    Matrix h = random_density(dim, rng);
    h = (0.5 * (h + h.adjoint())).eval();
    OperatorMatrix h0{1e7 * h, hc, OpRole::Hamiltonian};

    Matrix a(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) a(r, c) = cplx(dist(rng), dist(rng));
    std::vector<OperatorMatrix> collapse = {{2e3 * a, hc, OpRole::Collapse}};

    auto ham = make_hamiltonian(h0);
    EvolveOptions opts;
    opts.dt = 1e-9;
    opts.fock_tail_tol = 1.0;  // a random generator populates every level
    const auto result =
        evolve(DensityMatrix{random_density(dim, rng), hc}, ham, collapse, {0.0, 1e-6}, opts);
    CHECK(result.diag.max_trace_drift < 1e-10);
    CHECK(check_density_matrix(result.states[1]).ok(1e-9, 1e-10, -1e-7));
}

TEST_CASE("frame invariance for a single off-resonant drive") {
    KerrParameters kerr = bare_resonator(5.0, -0.5);
    const double omega_d = kerr.omega_r - 2.0 * kerr.kappa;
    const double eps = 0.8 * kerr.kappa;
    const double t_end = 4.0 / kerr.kappa;

    auto run = [&](double frame_freq) {
        HilbertConfig hc{14, 1, RotatingFrame::pump(frame_freq)};
        auto ham = make_hamiltonian(build_static_hamiltonian(kerr, nullptr, {}, hc));
        add_drive(ham, {omega_d, eps, DriveSpec::Label::Pump});
        const auto collapse = collapse_operators(kerr, QubitDissipation{}, hc);
        EvolveOptions opts;
        opts.dt = 2e-4 / kerr.kappa;
        return evolve(vacuum_state(hc), ham, collapse, {0.0, t_end}, opts);
    };

    const auto in_drive_frame = run(omega_d);
    const auto detuned_frame = run(omega_d - units::mhz_to_rad(30.0));
    CHECK(std::abs(mean_photon_number(in_drive_frame.states[1]) -
                   mean_photon_number(detuned_frame.states[1])) < 1e-8);
    CHECK(std::abs(std::abs(mean_field(in_drive_frame.states[1])) -
                   std::abs(mean_field(detuned_frame.states[1]))) < 1e-8);
}

TEST_CASE("fourth-order convergence under step halving") {
    KerrParameters kerr = bare_resonator(5.0, -0.8);
    const double omega_p = kerr.omega_r - 1.5 * kerr.kappa;
    HilbertConfig hc{14, 1, RotatingFrame::pump(omega_p)};
    const auto collapse = collapse_operators(kerr, QubitDissipation{}, hc);
    const double t_end = 1.0 / kerr.kappa;

    auto observable = [&](double dt) {
        auto ham = make_hamiltonian(build_static_hamiltonian(kerr, nullptr, {}, hc));
        add_drive(ham, {omega_p, 1.2 * kerr.kappa, DriveSpec::Label::Pump});
        EvolveOptions opts;
        opts.dt = dt;
        const auto result = evolve(vacuum_state(hc), ham, collapse, {0.0, t_end}, opts);
        return mean_photon_number(result.states[1]);
    };

    const double coarse_dt = t_end / 400.0;
    const double ref = observable(coarse_dt / 16.0);
    const double e1 = std::abs(observable(coarse_dt) - ref);
    const double e2 = std::abs(observable(coarse_dt / 2.0) - ref);
    CHECK(e1 / e2 > 10.0);
    CHECK(e1 / e2 < 26.0);
}

TEST_CASE("truncation overflow raises") {
    const KerrParameters kerr = bare_resonator();
    HilbertConfig hc{6, 1, RotatingFrame::pump(kerr.omega_r)};
    auto ham = make_hamiltonian(build_static_hamiltonian(kerr, nullptr, {}, hc));
    add_drive(ham, {kerr.omega_r, 5.0 * kerr.kappa, DriveSpec::Label::Pump});
    const auto collapse = collapse_operators(kerr, QubitDissipation{}, hc);
    CHECK_THROWS_AS(evolve(vacuum_state(hc), ham, collapse, {0.0, 5.0 / kerr.kappa}, {}),
                    TruncationError);
}

TEST_CASE("unstable explicit step raises an integration error") {
    const KerrParameters kerr = bare_resonator(5.0, -0.5);
    HilbertConfig hc{12, 1, RotatingFrame::pump(kerr.omega_r - 3.0 * kerr.kappa)};
    auto ham = make_hamiltonian(build_static_hamiltonian(kerr, nullptr, {}, hc));
    add_drive(ham, {kerr.omega_r - 3.0 * kerr.kappa, 2.0 * kerr.kappa, DriveSpec::Label::Pump});
    const auto collapse = collapse_operators(kerr, QubitDissipation{}, hc);
    EvolveOptions opts;
    opts.dt = 100.0 / kerr.kappa;  // far outside the stability region
    opts.min_steps = 2;
    opts.check_interval = 1;
    CHECK_THROWS_AS(evolve(vacuum_state(hc), ham, collapse, {0.0, 400.0 / kerr.kappa}, opts),
                    IntegrationError);
}

TEST_CASE("state builders and reductions") {
    HilbertConfig hc{10, 2, RotatingFrame::lab()};
    SUBCASE("thermal state at zero occupation is the vacuum") {
        const auto rho = thermal_state(0.0, hc);
        CHECK((rho.rho - vacuum_state(hc).rho).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("identity expectation is the trace") {
        const auto rho = thermal_state(0.7, hc, 1);
        CHECK(expectation(Matrix::Identity(hc.dim(), hc.dim()), rho).real() ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("partial trace of a product state returns the resonator factor") {
        const Eigen::VectorXcd v = coherent_state_vector(cplx(1.2, -0.4), hc.n_fock);
        Matrix res = v * v.adjoint();
        res /= res.trace().real();
        const auto rho = product_state(res, hc, 1);
        const auto reduced = partial_trace_resonator(rho);
        CHECK((reduced.rho - res).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(qubit_population(rho, 1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(qubit_population(rho, 0) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("coherent state mean field") {
        HilbertConfig big{40, 1, RotatingFrame::lab()};
        const cplx alpha(1.5, 0.7);
        CHECK(std::abs(mean_field(coherent_state(big, alpha)) - alpha) < 1e-8);
    }
    SUBCASE("density matrix checks flag violations") {
        auto rho = vacuum_state(hc);
        CHECK(check_density_matrix(rho).ok());
        rho.rho *= 1.5;
        CHECK(!check_density_matrix(rho).ok());
    }
}

TEST_CASE("pulse profile shape") {
    PulseProfile p;
    p.t_rise = 50e-9;
    p.t_measure = 200e-9;
    p.t_fall = 10e-9;
    p.t_hold = 300e-9;
    p.eps_measure = 2e7;
    p.eps_hold = 1.2e7;
    p.validate();
    CHECK(p.amplitude(0.0) == 0.0);
    CHECK(p.amplitude(25e-9) == doctest::Approx(1e7));
    CHECK(p.amplitude(150e-9) == doctest::Approx(2e7));
    CHECK(p.amplitude(255e-9) == doctest::Approx(1.6e7));
    CHECK(p.amplitude(400e-9) == doctest::Approx(1.2e7));
    // piecewise-linear continuity at the segment joints (bounded by the
    // steepest ramp slope over the probe interval)
    const double max_slope = std::abs(p.eps_measure - p.eps_hold) / p.t_fall +
                             p.eps_measure / p.t_rise;
    for (double t : {p.t_rise, p.measure_end(), p.hold_start()}) {
        CHECK(std::abs(p.amplitude(t - 1e-12) - p.amplitude(t + 1e-12)) < 2e-12 * max_slope);
    }
    PulseProfile bad = p;
    bad.t_fall = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("fock dimension suggestion") {
    CHECK(suggest_fock_dim(0.0) == 8);
    CHECK(suggest_fock_dim(10.0) == static_cast<int>(std::ceil(15.0 + 5.0 * std::sqrt(10.0))));
    CHECK_THROWS_AS(suggest_fock_dim(-1.0), std::domain_error);
}
