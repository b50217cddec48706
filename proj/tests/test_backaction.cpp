#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kerrsim/backaction.hpp"
#include "kerrsim/units.hpp"

using namespace kerrsim;

namespace {

KerrParameters desk_kerr(double k_mhz = -0.5) {
    KerrParameters kerr;
    kerr.omega_r = units::ghz_to_rad(6.4535);
    kerr.kappa = units::mhz_to_rad(5.0);
    kerr.K = units::mhz_to_rad(k_mhz);
    return kerr;
}

/// Synthetic transmon-like spectrum with a sqrt(2) matrix-element ladder.
TransmonSpectrum synthetic_spectrum(double omega01, double anharm, int levels = 3) {
    TransmonSpectrum s;
    s.omega = Eigen::VectorXd::Zero(levels);
    for (int i = 1; i < levels; ++i)
        s.omega(i) = i * omega01 + 0.5 * i * (i - 1) * anharm;
    s.n_matrix = Eigen::MatrixXd::Zero(levels, levels);
    for (int i = 0; i + 1 < levels; ++i) {
        s.n_matrix(i, i + 1) = std::sqrt(i + 1.0);
        s.n_matrix(i + 1, i) = std::sqrt(i + 1.0);
    }
    return s;
}

std::vector<double> ladder_g(double g01, int levels = 3) {
    std::vector<double> g;
    for (int i = 0; i + 1 < levels; ++i) g.push_back(g01 * std::sqrt(i + 1.0));
    return g;
}

}  // namespace

TEST_CASE("dispersive chi: two-level and transmon forms") {
    const auto kerr = desk_kerr(0.0);
    const double g = units::mhz_to_rad(40.0);
    const double delta = units::mhz_to_rad(-400.0);

    SUBCASE("pure two-level pull") {
        auto s = synthetic_spectrum(kerr.omega_r + delta, units::mhz_to_rad(-300.0), 2);
        const auto chi = dispersive_chi(s, {g}, kerr.omega_r);
        CHECK(chi.chi == doctest::Approx(g * g / delta).epsilon(1e-12));
        CHECK(chi.s_bar == 0.0);
        CHECK(chi.chi12 == 0.0);
    }
    SUBCASE("critical photon number at g/Delta = 1/10") {
        auto s = synthetic_spectrum(kerr.omega_r + 10.0 * g, units::mhz_to_rad(-300.0), 2);
        CHECK(dispersive_chi(s, {g}, kerr.omega_r).n_crit == doctest::Approx(25.0).epsilon(1e-10));
    }
    SUBCASE("paper backaction point reproduced by tuned inputs") {
        // chi/2pi = -0.8 MHz and s_bar/2pi = 1.7 MHz at Delta/2pi = -732 MHz
        // need chi01 = chi + s_bar = -2.5 MHz -> g01 = sqrt(2.5 * 732) MHz,
        // and chi12 = -2 s_bar = -3.4 MHz -> Delta + anharm = 2 g01^2 / chi12.
        const double g01_mhz = std::sqrt(2.5 * 732.0);
        const double anh_mhz = 2.0 * g01_mhz * g01_mhz / (-3.4) - (-732.0);
        auto s = synthetic_spectrum(kerr.omega_r + units::mhz_to_rad(-732.0),
                                    units::mhz_to_rad(anh_mhz), 3);
        const auto chi = dispersive_chi(s, ladder_g(units::mhz_to_rad(g01_mhz)), kerr.omega_r);
        CHECK(units::rad_to_mhz(chi.chi) == doctest::Approx(-0.8).epsilon(0.02));
        CHECK(units::rad_to_mhz(chi.s_bar) == doctest::Approx(1.7).epsilon(0.02));
    }
    SUBCASE("resonant detuning rejected") {
        auto s = synthetic_spectrum(kerr.omega_r, units::mhz_to_rad(-300.0), 2);
        CHECK_THROWS_AS(dispersive_chi(s, {g}, kerr.omega_r), std::domain_error);
    }
}

TEST_CASE("pump-referenced dispersive constants") {
    const auto kerr = desk_kerr(0.0);
    const double g = units::mhz_to_rad(30.0);
    const double delta = units::mhz_to_rad(-250.0);
    const double omega01 = kerr.omega_r + delta;

    SUBCASE("two-level truncation") {
        auto s = synthetic_spectrum(omega01, units::mhz_to_rad(-300.0), 2);
        const double omega_p = kerr.omega_r - 0.8 * kerr.kappa;
        const auto c = dispersive_constants(s, {g}, omega_p);
        const double chi0 = g * g / (omega01 - omega_p);
        CHECK(c.chi_p[0] == doctest::Approx(chi0).epsilon(1e-12));
        CHECK(c.s_p[0] == doctest::Approx(-chi0).epsilon(1e-12));
        CHECK(c.s_p[1] == doctest::Approx(chi0).epsilon(1e-12));
        // K_i boundary truncation: K_0 = 4 chi_0 l0^2, K_1 = -4 chi_0 l0^2
        const double l0 = -g / (omega01 - omega_p);
        CHECK(c.k_p[0] == doctest::Approx(4.0 * chi0 * l0 * l0).epsilon(1e-12));
        CHECK(c.k_p[1] == doctest::Approx(-4.0 * chi0 * l0 * l0).epsilon(1e-12));
        // qubit below pump -> positive lambda_0
        CHECK(c.lambda_p[0] > 0.0);
        CHECK(c.lambda_valid);
    }
    SUBCASE("pump frequency, not resonator frequency, enters the shifts") {
        auto s = synthetic_spectrum(omega01, units::mhz_to_rad(-320.0), 3);
        const double omega_p = kerr.omega_r - 4.0 * kerr.kappa;
        const auto at_pump = dispersive_constants(s, ladder_g(g), omega_p);
        const auto at_res = dispersive_constants(s, ladder_g(g), kerr.omega_r);
        CHECK(at_pump.s_p[0] == doctest::Approx(-g * g / (omega01 - omega_p)).epsilon(1e-12));
        CHECK(at_res.s_p[0] == doctest::Approx(-g * g / delta).epsilon(1e-12));
        CHECK(at_pump.s_p[0] != at_res.s_p[0]);
    }
    SUBCASE("exact resonance names the level pair") {
        auto s = synthetic_spectrum(omega01, units::mhz_to_rad(-320.0), 3);
        CHECK_THROWS_WITH_AS(dispersive_constants(s, ladder_g(g), s.omega(2) - s.omega(1)),
                             doctest::Contains("1-2"), std::domain_error);
    }
    SUBCASE("validity flag trips at |lambda| >= 0.3") {
        auto s = synthetic_spectrum(kerr.omega_r + units::mhz_to_rad(-60.0),
                                    units::mhz_to_rad(-320.0), 2);
        const auto c = dispersive_constants(s, {units::mhz_to_rad(30.0)}, kerr.omega_r);
        CHECK(!c.lambda_valid);
    }
}

TEST_CASE("pointer states") {
    const auto kerr = desk_kerr(-0.5);
    const double omega_p = kerr.omega_r - 2.0 * kerr.kappa;  // Omega = 4
    auto s = synthetic_spectrum(kerr.omega_r + units::mhz_to_rad(-200.0),
                                units::mhz_to_rad(-320.0), 2);
    const auto c = dispersive_constants(s, {units::mhz_to_rad(20.0)}, omega_p);

    SUBCASE("zero pump gives vacuum pointer states") {
        const auto p = pointer_states(c, kerr, omega_p, 0.0, 0.0, 0.0);
        CHECK(std::abs(p.alpha_p[0]) == 0.0);
        CHECK(std::abs(p.alpha_p[1]) == 0.0);
        CHECK(p.distinguishability == 0.0);
        CHECK(p.d_valid);
    }
    SUBCASE("linear reduction matches the closed form") {
        KerrParameters linear = kerr;
        linear.K = 0.0;
        linear.Kp = 0.0;
        DispersiveConstants lin = c;
        const double chi = units::mhz_to_rad(-0.9);
        lin.s_p = {chi, -chi};
        lin.k_p = {0.0, 0.0};
        const double eps = 1.3 * kerr.kappa;
        const auto p = pointer_states(lin, linear, omega_p, eps, 0.0, 0.0);
        const auto ref = linear_pointer_states(chi, linear.omega_r, omega_p, eps, linear.kappa);
        CHECK(std::abs(p.alpha_p[0] - ref.alpha_0) < 1e-10 * std::abs(ref.alpha_0));
        CHECK(std::abs(p.alpha_p[1] - ref.alpha_1) < 1e-10 * std::abs(ref.alpha_1));
        CHECK(p.distinguishability ==
              doctest::Approx(ref.distinguishability).epsilon(1e-10));
    }
    SUBCASE("distinguishability jumps between the level thresholds") {
        // scan pump amplitude: D spikes when level 1 has lost its L branch
        // while level 0 keeps it
        double eps_jump = 0.0, d_before = 0.0, d_after = 0.0;
        for (double frac = 0.5; frac < 4.5; frac += 0.01) {
            const double eps = frac * kerr.kappa;
            const auto p = pointer_states(c, kerr, omega_p, eps, 0.0, 0.0);
            if (p.branch[0] == Branch::L && p.branch[1] == Branch::H) {
                eps_jump = eps;
                d_after = p.distinguishability;
                break;
            }
            d_before = p.distinguishability;
        }
        REQUIRE(eps_jump > 0.0);
        // D grows toward the level-1 fold, then jumps as its L branch vanishes
        CHECK(d_after > 2.5 * d_before);
        CHECK(d_after > 1.0);
    }
    SUBCASE("requested branch must exist") {
        CHECK_THROWS_AS(
            pointer_states(c, kerr, omega_p, 0.01 * kerr.kappa, 0.0, 0.0,
                           BranchPolicy::uniform(Branch::H, 2)),
            std::domain_error);
    }
    SUBCASE("spectroscopy field closed form") {
        const double eps_s = 0.05 * kerr.kappa;
        const double omega_s = s.omega(1) + kerr.omega_r * 0.0;  // arbitrary probe
        const auto p = pointer_states(c, kerr, omega_p, 0.8 * kerr.kappa, eps_s, omega_s);
        const double n0 = std::norm(p.alpha_p[0]);
        const cplx expected =
            -eps_s / cplx(kerr.omega_r - omega_s + kerr.K * n0, -0.5 * kerr.kappa);
        CHECK(std::abs(p.alpha_s[0] - expected) < 1e-12 * std::abs(expected));
    }
}

TEST_CASE("stark and lamb shifts") {
    const auto kerr = desk_kerr(-0.5);
    const double omega_p = kerr.omega_r - 1.5 * kerr.kappa;
    auto s = synthetic_spectrum(kerr.omega_r + units::mhz_to_rad(-180.0),
                                units::mhz_to_rad(-300.0), 3);
    const auto c = dispersive_constants(s, ladder_g(units::mhz_to_rad(15.0)), omega_p);

    SUBCASE("vacuum pointer leaves only the static Lamb shift") {
        const auto p = pointer_states(c, kerr, omega_p, 0.0, 0.0, 0.0);
        const auto sh = stark_lamb_shifts(c, p, kerr);
        CHECK(sh.omega_r_prime == doctest::Approx(kerr.omega_r));
        CHECK(sh.lamb[0] == 0.0);
        const double lambda0 = -c.g[0] / (s.omega(1) - s.omega(0) - kerr.omega_r);
        CHECK(sh.lamb[1] == doctest::Approx(-c.g[0] * lambda0).epsilon(1e-12));
        CHECK(sh.omega_ppp[0] == doctest::Approx(s.omega(0)));
        CHECK(sh.omega_ppp[1] == doctest::Approx(s.omega(1) + sh.lamb[1]));
    }
    SUBCASE("stark shift uses the level's own amplitude") {
        const auto p = pointer_states(c, kerr, omega_p, 1.1 * kerr.kappa, 0.0, 0.0);
        const auto sh = stark_lamb_shifts(c, p, kerr);
        for (int i = 0; i < 3; ++i) {
            const double n = std::norm(p.alpha_p[static_cast<size_t>(i)]);
            CHECK(sh.omega_pp[static_cast<size_t>(i)] ==
                  doctest::Approx(s.omega(i) + c.s_p[static_cast<size_t>(i)] * n +
                                  0.25 * c.k_p[static_cast<size_t>(i)] * n * n));
        }
        // Kerr-shifted resonator frequency moves down for K < 0
        CHECK(sh.omega_r_prime < kerr.omega_r);
    }
}

TEST_CASE("backaction rates") {
    const auto kerr = desk_kerr(-0.5);
    const double omega_p = kerr.omega_r - 1.5 * kerr.kappa;
    auto s = synthetic_spectrum(kerr.omega_r + units::mhz_to_rad(-200.0),
                                units::mhz_to_rad(-300.0), 2);
    const double g = units::mhz_to_rad(20.0);
    const auto c = dispersive_constants(s, {g}, omega_p);

    SUBCASE("pure Purcell at zero rates and zero field") {
        const auto p = pointer_states(c, kerr, omega_p, 0.0, 0.0, 0.0);
        const auto sh = stark_lamb_shifts(c, p, kerr);
        const auto r = rates(c, p, sh, kerr, QubitDissipation::flat(0.0, 0.0, 2));
        CHECK(r.gamma_phi_tp == 0.0);
        CHECK(r.gamma_up == 0.0);
        CHECK(r.gamma_down == doctest::Approx(sh.lambda_r[0] * sh.lambda_r[0] * kerr.kappa));
        // g/Delta = -0.1 -> Purcell ~ 0.01 kappa
        CHECK(r.gamma_down == doctest::Approx(0.01 * kerr.kappa).epsilon(0.1));
    }
    SUBCASE("measurement dephasing is kappa D^2 / 2 at gamma = 0") {
        const double gphi = units::khz_to_rad(50.0);
        const auto p = pointer_states(c, kerr, omega_p, 1.2 * kerr.kappa, 0.0, 0.0);
        const auto sh = stark_lamb_shifts(c, p, kerr);
        const auto r = rates(c, p, sh, kerr, QubitDissipation::flat(0.0, gphi, 2));
        const double d2 = r.distinguishability * r.distinguishability;
        CHECK(r.gamma_phi_tp - gphi == doctest::Approx(0.5 * kerr.kappa * d2).epsilon(1e-12));
        CHECK(r.gamma_2_pred ==
              doctest::Approx(0.5 * (r.gamma_down + r.gamma_up) + r.gamma_phi_tp));
    }
    SUBCASE("gamma_up includes dressed dephasing") {
        const double gphi = units::khz_to_rad(80.0);
        const auto p = pointer_states(c, kerr, omega_p, 1.0 * kerr.kappa, 0.0, 0.0);
        const auto sh = stark_lamb_shifts(c, p, kerr);
        const auto r = rates(c, p, sh, kerr, QubitDissipation::flat(0.0, gphi, 2));
        const double d2 = r.distinguishability * r.distinguishability;
        const double n0 = std::norm(p.alpha_p[0]);
        CHECK(r.gamma_up == doctest::Approx((2.0 * gphi + kerr.kappa * d2) *
                                            c.lambda_p[0] * c.lambda_p[0] * n0));
        CHECK(r.gamma_down >= r.gamma_up);
    }
}

TEST_CASE("linear pointer-state identities: 1000 random draws") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> chi_dist(-3.0, 3.0);
    std::uniform_real_distribution<double> delta_dist(-8.0, 8.0);
    std::uniform_real_distribution<double> eps_dist(0.01, 5.0);
    const double kappa = units::mhz_to_rad(5.0);
    const double omega_r = units::ghz_to_rad(6.4535);

    for (int trial = 0; trial < 1000; ++trial) {
        const double chi = chi_dist(rng) * 0.2 * kappa;
        const double omega_p = omega_r - delta_dist(rng) * kappa;
        const double eps = eps_dist(rng) * kappa;
        const auto lp = linear_pointer_states(chi, omega_r, omega_p, eps, kappa);
        const double d2 = lp.distinguishability * lp.distinguishability;
        const double lhs = lp.gamma_phi_m;
        const double rhs = 0.5 * kappa * d2;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(rhs), kappa));
    }

    SUBCASE("chi = 0 degenerates cleanly") {
        const auto lp = linear_pointer_states(0.0, omega_r, omega_r, 2.0 * kappa, kappa);
        CHECK(lp.alpha_0 == lp.alpha_1);
        CHECK(lp.distinguishability == 0.0);
        CHECK(lp.gamma_phi_m == 0.0);
    }
    SUBCASE("resonant weak-chi stark shift follows the photon number") {
        const double chi = 0.02 * kappa;
        const auto lp = linear_pointer_states(chi, omega_r, omega_r, kappa, kappa);
        const double nbar = std::norm(lp.alpha_0);
        CHECK(lp.delta_omega_a == doctest::Approx(2.0 * chi * nbar).epsilon(0.01));
    }
}

TEST_CASE("photon number from the measured stark shift") {
    const auto kerr = desk_kerr(-0.5);
    const double omega_p = kerr.omega_r - 1.5 * kerr.kappa;
    auto s = synthetic_spectrum(kerr.omega_r + units::mhz_to_rad(-200.0),
                                units::mhz_to_rad(-300.0), 3);
    const auto c = dispersive_constants(s, ladder_g(units::mhz_to_rad(18.0)), omega_p);

    CHECK(nbar_from_stark(0.0, c) == 0.0);

    // round trip: shift(n) inverted back to n
    const double s_diff = c.s_p[1] - c.s_p[0];
    const double k_diff = 0.25 * (c.k_p[1] - c.k_p[0]);
    for (double n = 0.0; n <= 50.0; n += 2.5) {
        const double shift = s_diff * n + k_diff * n * n;
        CHECK(nbar_from_stark(shift, c) == doctest::Approx(n).epsilon(1e-9));
    }

    // unphysical shifts: linear branch with the wrong sign, and a quadratic
    // with no real solution
    DispersiveConstants synth = c;
    synth.s_p = {0.5, -0.5};
    synth.k_p = {0.0, 0.0};
    CHECK_THROWS_AS(nbar_from_stark(+1.0, synth), std::domain_error);  // s_diff = -1, n < 0
    synth.k_p = {0.2, -0.2};  // quadratic term -0.1 n^2
    CHECK_THROWS_AS(nbar_from_stark(+10.0, synth), std::domain_error);  // negative discriminant
}
