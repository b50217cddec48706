#include "kerrsim/transmon.hpp"

#include <cmath>
#include <stdexcept>

#include "kerrsim/constants.hpp"
#include "kerrsim/units.hpp"

namespace kerrsim {

QubitDissipation QubitDissipation::flat(double gamma, double gamma_phi, int m_levels) {
    QubitDissipation d;
    d.gamma = gamma;
    d.gamma_phi.assign(static_cast<size_t>(m_levels), gamma_phi);
    return d;
}

double effective_ej(double ej0, double flux_ratio) {
    return 2.0 * ej0 * std::abs(std::cos(M_PI * flux_ratio));
}

TransmonSpectrum diagonalize_cpb(const TransmonSpec& spec) {
    if (spec.ej0 < 0.0 || spec.ec <= 0.0)
        throw std::domain_error("diagonalize_cpb: energies must be positive");
    if (spec.n_charge_cutoff < 10)
        throw std::domain_error("diagonalize_cpb: charge cutoff must be >= 10");
    if (spec.m_levels < 2 || spec.m_levels > 2 * spec.n_charge_cutoff - 3)
        throw std::domain_error("diagonalize_cpb: M outside the reliable window");

    const int nc = spec.n_charge_cutoff;
    const int dim = 2 * nc + 1;
    const double ej = effective_ej(spec.ej0, spec.flux_ratio);

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double n = static_cast<double>(k - nc);
        h(k, k) = spec.ec * (n - spec.ng) * (n - spec.ng);
        if (k + 1 < dim) {
            h(k, k + 1) = -0.5 * ej;
            h(k + 1, k) = -0.5 * ej;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize_cpb: eigensolver failed");

    const int m = spec.m_levels;
    Eigen::MatrixXd vecs = solver.eigenvectors().leftCols(m);

    // Retained states must have negligible weight on the edge charge states,
    // otherwise the cutoff is too small for this M.
    for (int i = 0; i < m; ++i) {
        const double edge = std::abs(vecs(0, i)) + std::abs(vecs(dim - 1, i));
        if (edge > 1e-6)
            throw std::domain_error("diagonalize_cpb: level " + std::to_string(i) +
                                    " reaches the charge cutoff; increase n_charge_cutoff");
    }

    Eigen::VectorXd n_charge(dim);
    for (int k = 0; k < dim; ++k) n_charge(k) = static_cast<double>(k - nc);

    // Gauge: make <i|N|i+1> > 0, fixing each eigenvector sign in turn.
    for (int i = 0; i + 1 < m; ++i) {
        const double elem = vecs.col(i).dot(n_charge.asDiagonal() * vecs.col(i + 1));
        if (elem < 0.0) vecs.col(i + 1) *= -1.0;
    }

    TransmonSpectrum out;
    out.ej_eff = ej;
    out.omega = solver.eigenvalues().head(m).array() - solver.eigenvalues()(0);
    out.n_matrix = vecs.transpose() * n_charge.asDiagonal() * vecs;
    out.n_matrix = 0.5 * (out.n_matrix + out.n_matrix.transpose()).eval();
    return out;
}

double vacuum_voltage(double omega_r, double z0) {
    return omega_r * std::sqrt(constants().hbar * z0 / M_PI);
}

std::vector<double> coupling_constants(const TransmonSpectrum& spectrum, double beta,
                                       double delta_v0) {
    if (beta <= 0.0 || beta >= 1.0)
        throw std::domain_error("coupling_constants: beta must be in (0, 1)");
    std::vector<double> g;
    for (int i = 0; i + 1 < spectrum.levels(); ++i)
        g.push_back(2.0 * constants().e * beta * spectrum.n_matrix(i, i + 1) * delta_v0 /
                    constants().hbar);
    return g;
}

TransmonSpec fit_transmon_from_frequencies(double omega01, double anharmonicity, double ng,
                                           int n_charge_cutoff, int m_levels) {
    if (omega01 <= 0.0 || anharmonicity >= 0.0)
        throw std::domain_error("fit_transmon_from_frequencies: expects omega01 > 0, anharmonicity < 0");

    // Transmon asymptotics as the starting point: ec ~ -4a, ej ~ w01^2/(2 ec).
    double ec = -4.0 * anharmonicity;
    double ej = omega01 * omega01 / (2.0 * ec);

    const double tol = units::khz_to_rad(1.0);
    const int cutoff = std::max(n_charge_cutoff, 20);

    auto eval = [&](double ej_v, double ec_v) {
        TransmonSpec s;
        s.ej0 = 0.5 * ej_v;  // flux_ratio = 0 makes ej_eff = ej_v
        s.ec = ec_v;
        s.ng = ng;
        s.n_charge_cutoff = cutoff;
        s.m_levels = std::max(m_levels, 3);
        const TransmonSpectrum sp = diagonalize_cpb(s);
        return std::pair<double, double>(sp.omega01(), sp.anharmonicity());
    };

    for (int iter = 0; iter < 60; ++iter) {
        const auto [w01, a] = eval(ej, ec);
        const double r1 = w01 - omega01;
        const double r2 = a - anharmonicity;
        if (std::abs(r1) < tol && std::abs(r2) < tol) {
            TransmonSpec s;
            s.ej0 = 0.5 * ej;
            s.ec = ec;
            s.ng = ng;
            s.n_charge_cutoff = cutoff;
            s.m_levels = m_levels;
            return s;
        }
        const double dej = 1e-6 * ej;
        const double dec = 1e-6 * ec;
        const auto [w01_j, a_j] = eval(ej + dej, ec);
        const auto [w01_c, a_c] = eval(ej, ec + dec);
        const double j11 = (w01_j - w01) / dej, j12 = (w01_c - w01) / dec;
        const double j21 = (a_j - a) / dej, j22 = (a_c - a) / dec;
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-300)
            throw std::runtime_error("fit_transmon_from_frequencies: singular Jacobian");
        double step_ej = -(j22 * r1 - j12 * r2) / det;
        double step_ec = -(-j21 * r1 + j11 * r2) / det;
        // keep the iterate positive
        if (ej + step_ej <= 0.0) step_ej = -0.5 * ej;
        if (ec + step_ec <= 0.0) step_ec = -0.5 * ec;
        ej += step_ej;
        ec += step_ec;
    }
    throw std::runtime_error("fit_transmon_from_frequencies: Newton iteration did not converge");
}

}  // namespace kerrsim
