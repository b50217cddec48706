#pragma once

#include <Eigen/Dense>
#include <complex>

#include "kerrsim/circuit.hpp"
#include "kerrsim/lindblad.hpp"

namespace kerrsim {

/// Rectangular phase-space grid sampling Q(alpha) = <alpha|rho|alpha>
/// (unnormalized convention, no 1/pi; the probability integrals below
/// reinstate it).
struct PhaseSpaceGrid {
    double re_min = 0, im_min = 0;
    double step = 0;
    int nx = 0, ny = 0;
    Eigen::MatrixXd q;  ///< q(ix, iy) at alpha = re_min + ix*step + i(im_min + iy*step)

    cplx point(int ix, int iy) const { return {re_min + ix * step, im_min + iy * step}; }
    /// (1/pi) sum Q dA; approaches tr(rho) for adequate extents.
    double total_weight() const { return q.sum() * step * step / M_PI; }
};

struct GridSpec {
    double re_min = 0, re_max = 0;
    double im_min = 0, im_max = 0;
    double step = 0.2;
};

/// Oriented split line in phase space: a point on the line plus a unit
/// normal; the H side is where Re[conj(normal) (alpha - point)] > 0.
struct Separatrix {
    cplx point;
    cplx normal;

    double signed_distance(cplx alpha) const { return (std::conj(normal) * (alpha - point)).real(); }
};

/// Husimi Q of a resonator-only density matrix over the grid. Warns on
/// stderr when the grid does not extend at least 3 units past the largest
/// occupied amplitude.
PhaseSpaceGrid q_function(const DensityMatrix& rho_res, const GridSpec& spec);

/// Grid centered on the semiclassical solutions at the hold point, padded by
/// `pad` (default 4 amplitude units beyond the largest |alpha| component).
GridSpec default_grid_for(const KerrParameters& kerr, double omega_reduced, double eps_hold,
                          double step = 0.2, double pad = 4.0);

/// p_s = integral of Q over the H side / integral of Q, each with the 1/pi
/// measure; the ratio removes truncation and extent bias.
double switching_probability(const PhaseSpaceGrid& grid, const Separatrix& sep);

/// Convenience: Q function + default separatrix in one call.
double switching_probability(const DensityMatrix& rho_res, const Separatrix& sep,
                             const GridSpec& spec);

/// Perpendicular bisector of the segment joining the semiclassical L and H
/// amplitudes at the (bistable) hold conditions. Throws when the hold point
/// is not bistable: the latching protocol requires hysteresis.
Separatrix default_separatrix(const KerrParameters& kerr, double omega_reduced, double eps_hold,
                              bool include_kp = false);

}  // namespace kerrsim
