#include "kerrsim/husimi.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "kerrsim/semiclassical.hpp"

namespace kerrsim {

PhaseSpaceGrid q_function(const DensityMatrix& rho_res, const GridSpec& spec) {
    if (rho_res.hc.m_levels != 1)
        throw std::domain_error("q_function: expects a resonator-only density matrix");
    if (spec.step <= 0 || spec.re_max <= spec.re_min || spec.im_max <= spec.im_min)
        throw std::domain_error("q_function: malformed grid spec");

    PhaseSpaceGrid grid;
    grid.re_min = spec.re_min;
    grid.im_min = spec.im_min;
    grid.step = spec.step;
    grid.nx = static_cast<int>(std::floor((spec.re_max - spec.re_min) / spec.step)) + 1;
    grid.ny = static_cast<int>(std::floor((spec.im_max - spec.im_min) / spec.step)) + 1;
    grid.q.resize(grid.nx, grid.ny);

    const int nf = rho_res.hc.n_fock;
    // largest meaningfully occupied amplitude, for the extent warning
    double n_occupied = 0.0;
    for (int n = 0; n < nf; ++n) {
        const double p = rho_res.rho(n, n).real();
        if (p > 1e-4) n_occupied = n;
    }
    const double alpha_max = std::sqrt(n_occupied);
    const double reach = std::min({std::abs(spec.re_min), std::abs(spec.re_max),
                                   std::abs(spec.im_min), std::abs(spec.im_max)});
    if (reach < alpha_max + 2.5)
        std::cerr << "q_function: grid reach " << reach << " is close to the occupied amplitude "
                  << alpha_max << "; weight may be clipped\n";

    Eigen::VectorXcd v(nf), w(nf);
    for (int ix = 0; ix < grid.nx; ++ix) {
        for (int iy = 0; iy < grid.ny; ++iy) {
            v = coherent_state_vector(grid.point(ix, iy), nf);
            w.noalias() = rho_res.rho * v;
            grid.q(ix, iy) = std::max(0.0, v.dot(w).real());  // <alpha|rho|alpha>
        }
    }
    return grid;
}

GridSpec default_grid_for(const KerrParameters& kerr, double omega_reduced, double eps_hold,
                          double step, double pad) {
    const auto sols = steady_states(omega_reduced, eps_hold, kerr);
    double ext = 1.0;
    for (const auto& s : sols)
        if (s.stable) ext = std::max(ext, std::abs(s.alpha));
    GridSpec spec;
    spec.step = step;
    spec.re_min = -(ext + pad);
    spec.re_max = ext + pad;
    spec.im_min = -(ext + pad);
    spec.im_max = ext + pad;
    return spec;
}

double switching_probability(const PhaseSpaceGrid& grid, const Separatrix& sep) {
    double total = 0.0, high = 0.0;
    for (int ix = 0; ix < grid.nx; ++ix)
        for (int iy = 0; iy < grid.ny; ++iy) {
            const double q = grid.q(ix, iy);
            total += q;
            if (sep.signed_distance(grid.point(ix, iy)) > 0.0) high += q;
        }
    if (total <= 0.0) throw std::domain_error("switching_probability: empty Q distribution");
    return high / total;
}

double switching_probability(const DensityMatrix& rho_res, const Separatrix& sep,
                             const GridSpec& spec) {
    return switching_probability(q_function(rho_res, spec), sep);
}

Separatrix default_separatrix(const KerrParameters& kerr, double omega_reduced, double eps_hold,
                              bool include_kp) {
    const auto sols = steady_states(omega_reduced, eps_hold, kerr, include_kp);
    const auto low = pick_branch(sols, Branch::L);
    const auto high = pick_branch(sols, Branch::H);
    if (!low || !high)
        throw std::domain_error(
            "default_separatrix: hold point is not bistable (latching requires hysteresis)");
    const cplx d = high->alpha - low->alpha;
    if (std::abs(d) == 0.0)
        throw std::domain_error("default_separatrix: degenerate L/H amplitudes");
    Separatrix sep;
    sep.point = 0.5 * (low->alpha + high->alpha);
    sep.normal = d / std::abs(d);
    return sep;
}

}  // namespace kerrsim
