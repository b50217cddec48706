#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kerrsim/circuit.hpp"
#include "kerrsim/hilbert.hpp"
#include "kerrsim/semiclassical.hpp"
#include "kerrsim/transmon.hpp"

namespace kerrsim {

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// System state on the truncated Fock (x) M-level space.
struct DensityMatrix {
    Matrix rho;
    HilbertConfig hc;
};

struct DensityMatrixCheck {
    double trace_error = 0;      ///< |tr rho - 1|
    double hermiticity_error = 0;///< max |rho - rho^dag| / max |rho|
    double min_eigenvalue = 0;   ///< only filled when eigenvalues requested
    bool ok(double trace_tol = 1e-8, double herm_tol = 1e-10, double eig_tol = -1e-7) const {
        return trace_error < trace_tol && hermiticity_error < herm_tol &&
               min_eigenvalue >= eig_tol;
    }
};

DensityMatrixCheck check_density_matrix(const DensityMatrix& rho, bool with_eigenvalues = true);

// State builders.
Eigen::VectorXcd coherent_state_vector(cplx alpha, int n_fock);
DensityMatrix vacuum_state(const HilbertConfig& hc, int qubit_level = 0);
DensityMatrix fock_state(const HilbertConfig& hc, int n, int qubit_level = 0);
DensityMatrix coherent_state(const HilbertConfig& hc, cplx alpha, int qubit_level = 0);
/// Truncated, renormalized geometric distribution over Fock states.
DensityMatrix thermal_state(double n_th, const HilbertConfig& hc, int qubit_level = 0);
/// Resonator density matrix (x) qubit projector |level><level|.
DensityMatrix product_state(const Matrix& rho_res, const HilbertConfig& hc, int qubit_level);

// Observables and reductions.
cplx expectation(const Matrix& op, const DensityMatrix& rho);
DensityMatrix partial_trace_resonator(const DensityMatrix& rho);
double qubit_population(const DensityMatrix& rho, int level);
double mean_photon_number(const DensityMatrix& rho);
cplx mean_field(const DensityMatrix& rho);  ///< <a>
/// Population of the top two Fock levels (truncation indicator).
double fock_tail_weight(const DensityMatrix& rho);

/// One drive tone in the rotating frame: eps * env(t) * exp(-i delta t) a^dag + h.c.,
/// delta = omega_d - frame.omega_res. Envelope values must stay within [0, 1].
struct DriveTerm {
    DriveSpec spec;
    std::function<double(double)> envelope;  ///< dimensionless, in [0, 1]
    double delta = 0;
};

struct TimeDependentHamiltonian {
    OperatorMatrix h0;
    std::vector<DriveTerm> drives;
    HilbertConfig hc;
};

/// Static system Hamiltonian in the rotating frame of hc.frame:
///   (omega_r - w_res) a^dag a + K/2 a^dag^2 a^2 + K'/3 a^dag^3 a^3
/// + sum_i (omega_i - i w_qb) |i><i| + sum_i g_i (a^dag |i><i+1| + h.c.)
/// A nonzero coupling requires a shared frame frequency, otherwise the
/// Jaynes-Cummings term would be time dependent.
OperatorMatrix build_static_hamiltonian(const KerrParameters& kerr,
                                        const TransmonSpectrum* spectrum,
                                        const std::vector<double>& g_list,
                                        const HilbertConfig& hc);

TimeDependentHamiltonian make_hamiltonian(OperatorMatrix h0);

/// Appends a drive tone; constant unit envelope when none given.
void add_drive(TimeDependentHamiltonian& h, const DriveSpec& drive,
               std::function<double(double)> envelope = nullptr);

/// Resonator decay/excitation (kappa, n_th), multilevel qubit relaxation
/// gamma_{i+1,i} = (i+1) gamma and dephasing sqrt(2 gamma_phi_i) |i><i|.
std::vector<OperatorMatrix> collapse_operators(const KerrParameters& kerr,
                                               const QubitDissipation& dissipation,
                                               const HilbertConfig& hc);

struct EvolveOptions {
    double dt = 0;            ///< explicit step (s); 0 chooses one from operator norms
    double dt_scale = 1.0;    ///< multiplies the automatic step
    double trace_tol = 1e-6;
    double fock_tail_tol = 1e-5;
    int check_interval = 25;  ///< steps between trace/truncation checks
    int min_steps = 64;       ///< lower bound on total step count
};

struct EvolveDiagnostics {
    double max_trace_drift = 0;
    double max_fock_tail = 0;
    long steps = 0;
    double dt = 0;
};

struct EvolveResult {
    std::vector<DensityMatrix> states;  ///< one per t_grid entry
    EvolveDiagnostics diag;
};

/// Integrate d rho/dt = -i [H(t), rho] + sum_k D[c_k] rho with a fixed-step
/// 4th-order Runge-Kutta scheme, envelopes sampled at every substage, and
/// rho re-Hermitized after each step. Snapshots at the (increasing) t_grid;
/// rho0 is the state at t_grid.front(). Throws IntegrationError on trace
/// drift and TruncationError when the top two Fock levels fill up.
EvolveResult evolve(const DensityMatrix& rho0, const TimeDependentHamiltonian& h,
                    const std::vector<OperatorMatrix>& collapse,
                    const std::vector<double>& t_grid, const EvolveOptions& opts = {});

}  // namespace kerrsim
