#include "kerrsim/backaction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kerrsim/polyroots.hpp"

namespace kerrsim {

namespace {

double at_or_zero(const std::vector<double>& v, int i) {
    return (i >= 0 && i < static_cast<int>(v.size())) ? v[static_cast<size_t>(i)] : 0.0;
}

}  // namespace

ChiSet dispersive_chi(const TransmonSpectrum& spectrum, const std::vector<double>& g_list,
                      double omega_r) {
    if (spectrum.levels() < 2 || g_list.empty())
        throw std::domain_error("dispersive_chi: need at least two levels and g01");
    const double delta = spectrum.omega01() - omega_r;
    if (delta == 0.0) throw std::domain_error("dispersive_chi: qubit resonant with resonator");
    ChiSet out;
    const double g = g_list[0];
    out.chi01 = g * g / delta;
    out.n_crit = delta * delta / (4.0 * g * g);
    if (spectrum.levels() >= 3 && g_list.size() >= 2) {
        const double d12 = spectrum.omega(2) - spectrum.omega(1) - omega_r;
        if (d12 == 0.0)
            throw std::domain_error("dispersive_chi: 1-2 transition resonant with resonator");
        out.chi12 = g_list[1] * g_list[1] / d12;
    }
    out.chi = out.chi01 - 0.5 * out.chi12;
    out.s_bar = -0.5 * out.chi12;
    return out;
}

DispersiveConstants dispersive_constants(const TransmonSpectrum& spectrum,
                                         const std::vector<double>& g_list, double omega_p) {
    const int m = spectrum.levels();
    if (static_cast<int>(g_list.size()) < m - 1)
        throw std::domain_error("dispersive_constants: need g_{i,i+1} for all level pairs");

    DispersiveConstants out;
    out.omega_p = omega_p;
    out.omega = spectrum.omega;
    out.g.assign(g_list.begin(), g_list.begin() + (m - 1));

    for (int i = 0; i + 1 < m; ++i) {
        const double denom = spectrum.omega(i + 1) - spectrum.omega(i) - omega_p;
        if (denom == 0.0)
            throw std::domain_error("dispersive_constants: pump resonant with transition " +
                                    std::to_string(i) + "-" + std::to_string(i + 1));
        const double lam = -out.g[i] / denom;
        out.lambda_p.push_back(lam);
        out.chi_p.push_back(-out.g[i] * lam);
        if (std::abs(lam) >= 0.3) out.lambda_valid = false;
    }

    for (int i = 0; i < m; ++i) {
        const double chi_i = at_or_zero(out.chi_p, i);
        const double chi_im1 = at_or_zero(out.chi_p, i - 1);
        out.s_p.push_back(-(chi_i - chi_im1));
    }
    for (int i = 0; i < m; ++i) {
        const double l_i = at_or_zero(out.lambda_p, i);
        const double l_im1 = at_or_zero(out.lambda_p, i - 1);
        const double l_ip1 = at_or_zero(out.lambda_p, i + 1);
        const double l_im2 = at_or_zero(out.lambda_p, i - 2);
        const double k = -4.0 * out.s_p[static_cast<size_t>(i)] * (l_i * l_i + l_im1 * l_im1) -
                         (3.0 * at_or_zero(out.chi_p, i + 1) * l_i * l_i -
                          at_or_zero(out.chi_p, i) * l_ip1 * l_ip1) +
                         3.0 * (at_or_zero(out.chi_p, i - 2) * l_im1 * l_im1 -
                                at_or_zero(out.chi_p, i - 1) * l_im2 * l_im2);
        out.k_p.push_back(k);
    }
    return out;
}

PointerStates pointer_states(const DispersiveConstants& constants, const KerrParameters& kerr,
                             double omega_p, double eps_p, double eps_s, double omega_s,
                             const BranchPolicy& policy) {
    if (kerr.kappa <= 0.0) throw std::domain_error("pointer_states: kappa must be > 0");
    const int m = constants.levels();
    PointerStates out;

    for (int i = 0; i < m; ++i) {
        const double delta_i = kerr.omega_r - omega_p + constants.s_p[static_cast<size_t>(i)];
        const double k_eff = kerr.K + constants.k_p[static_cast<size_t>(i)] / 6.0;
        const auto sols = steady_states_detuned(delta_i, kerr.kappa, k_eff, kerr.Kp, eps_p);

        std::optional<Branch> want;
        if (i < static_cast<int>(policy.per_level.size())) want = policy.per_level[static_cast<size_t>(i)];

        std::optional<SteadyStateSolution> sel;
        if (want) {
            sel = pick_branch(sols, *want);
            if (!sel)
                throw std::domain_error("pointer_states: requested branch " + to_string(*want) +
                                        " absent for level " + std::to_string(i));
        } else {
            // adiabatic continuation from low power: L while it exists
            sel = pick_branch(sols, Branch::L);
            if (!sel) sel = pick_branch(sols, Branch::H);
            if (!sel) throw std::domain_error("pointer_states: no stable solution for level " +
                                              std::to_string(i));
        }
        out.alpha_p.push_back(sel->alpha);
        out.branch.push_back(sel->branch);

        const double n_p = std::norm(sel->alpha);
        const cplx denom_s(kerr.omega_r - omega_s + kerr.K * n_p + kerr.Kp * n_p * n_p,
                           -0.5 * kerr.kappa);
        out.alpha_s.push_back(eps_s == 0.0 ? cplx(0.0) : -eps_s / denom_s);
    }
    if (m >= 2) out.distinguishability = std::abs(out.alpha_p[1] - out.alpha_p[0]);
    out.d_valid = out.distinguishability * out.distinguishability < 0.5;
    return out;
}

StarkLambShifts stark_lamb_shifts(const DispersiveConstants& constants,
                                  const PointerStates& pointer, const KerrParameters& kerr) {
    const int m = constants.levels();
    if (static_cast<int>(pointer.alpha_p.size()) != m)
        throw std::domain_error("stark_lamb_shifts: pointer/constants level mismatch");

    StarkLambShifts out;
    for (int i = 0; i < m; ++i) {
        const double n = std::norm(pointer.alpha_p[static_cast<size_t>(i)]);
        out.omega_pp.push_back(constants.omega(i) + constants.s_p[static_cast<size_t>(i)] * n +
                               0.25 * constants.k_p[static_cast<size_t>(i)] * n * n);
    }
    const double n0 = std::norm(pointer.alpha_p[0]);
    out.omega_r_prime = kerr.omega_r + 2.0 * kerr.K * n0 + 3.0 * kerr.Kp * n0 * n0;

    for (int i = 0; i + 1 < m; ++i) {
        const double denom = out.omega_pp[static_cast<size_t>(i + 1)] -
                             out.omega_pp[static_cast<size_t>(i)] - out.omega_r_prime;
        if (denom == 0.0)
            throw std::domain_error("stark_lamb_shifts: dressed resonance at level pair " +
                                    std::to_string(i) + "-" + std::to_string(i + 1));
        out.lambda_r.push_back(-constants.g[static_cast<size_t>(i)] / denom);
    }
    for (int i = 0; i < m; ++i) {
        const double lamb =
            i == 0 ? 0.0
                   : -constants.g[static_cast<size_t>(i - 1)] * out.lambda_r[static_cast<size_t>(i - 1)];
        out.lamb.push_back(lamb);
        out.omega_ppp.push_back(out.omega_pp[static_cast<size_t>(i)] + lamb);
    }
    return out;
}

BackactionRates rates(const DispersiveConstants& constants, const PointerStates& pointer,
                      const StarkLambShifts& shifts, const KerrParameters& kerr,
                      const QubitDissipation& dissipation) {
    if (constants.levels() < 2)
        throw std::domain_error("rates: two-level reduction needs at least two levels");

    const double gamma = dissipation.gamma;
    const double gamma_phi = dissipation.gamma_phi.empty() ? 0.0 : dissipation.gamma_phi[0];
    const double d = pointer.distinguishability;
    const double d2 = d * d;
    const double n0 = std::norm(pointer.alpha_p[0]);
    const double lambda0 = constants.lambda_p.empty() ? 0.0 : constants.lambda_p[0];
    const double lambda0_r = shifts.lambda_r.empty() ? 0.0 : shifts.lambda_r[0];

    BackactionRates out;
    out.distinguishability = d;
    out.gamma_up = (2.0 * gamma_phi + kerr.kappa * d2) * lambda0 * lambda0 * n0;
    out.gamma_down = gamma + out.gamma_up + lambda0_r * lambda0_r * kerr.kappa;

    double dressed_decay = 0.0;
    if (gamma > 0.0 && !constants.g.empty() && constants.g[0] != 0.0) {
        const double chi0 = at_or_zero(constants.chi_p, 0);
        const double chi1 = at_or_zero(constants.chi_p, 1);
        const cplx mix = 2.0 * chi0 * pointer.alpha_p[0] -
                         chi1 * (pointer.alpha_p.size() > 1 ? pointer.alpha_p[1] : cplx(0.0));
        dressed_decay = gamma * std::norm(mix) / (2.0 * constants.g[0] * constants.g[0]);
    }
    out.gamma_phi_tp = gamma_phi + 0.5 * kerr.kappa * d2 + dressed_decay;
    out.gamma_2_pred = 0.5 * (out.gamma_down + out.gamma_up) + out.gamma_phi_tp;
    out.valid = pointer.d_valid && constants.lambda_valid;
    return out;
}

LinearPointerStates linear_pointer_states(double chi, double omega_r, double omega_p,
                                          double eps_p, double kappa) {
    LinearPointerStates out;
    const cplx d0(omega_r - omega_p + chi, -0.5 * kappa);
    const cplx d1(omega_r - omega_p - chi, -0.5 * kappa);
    out.alpha_0 = -eps_p / d0;
    out.alpha_1 = -eps_p / d1;
    out.distinguishability = std::abs(out.alpha_0 - out.alpha_1);
    // Im ordering follows the e^{-i omega t} field convention of the drive
    // term, which makes Gamma_phi_m = (kappa/2) D^2 hold exactly.
    const cplx overlap = std::conj(out.alpha_0) * out.alpha_1;
    out.gamma_phi_m = 2.0 * chi * overlap.imag();
    out.delta_omega_a = 2.0 * chi * overlap.real();
    return out;
}

double nbar_from_stark(double delta_omega01, const DispersiveConstants& constants) {
    if (constants.levels() < 2)
        throw std::domain_error("nbar_from_stark: need at least two levels");
    const double s = constants.s_p[1] - constants.s_p[0];
    const double q = 0.25 * (constants.k_p[1] - constants.k_p[0]);
    if (delta_omega01 == 0.0) return 0.0;

    if (q == 0.0) {
        if (s == 0.0) throw std::domain_error("nbar_from_stark: vanishing Stark coefficients");
        const double n = delta_omega01 / s;
        if (n < 0.0) throw std::domain_error("nbar_from_stark: shift is on the unphysical side");
        return n;
    }
    // q n^2 + s n - delta = 0; smallest non-negative root
    const double disc = s * s + 4.0 * q * delta_omega01;
    if (disc < 0.0) throw std::domain_error("nbar_from_stark: no real solution for this shift");
    const double sq = std::sqrt(disc);
    const double r1 = (-s + sq) / (2.0 * q);
    const double r2 = (-s - sq) / (2.0 * q);
    double best = -1.0;
    for (double r : {r1, r2})
        if (r >= 0.0 && (best < 0.0 || r < best)) best = r;
    if (best < 0.0) throw std::domain_error("nbar_from_stark: no non-negative photon number");
    return best;
}

}  // namespace kerrsim
