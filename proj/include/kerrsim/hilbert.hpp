#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace kerrsim {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Rotating frame: resonator operators rotate at omega_res, qubit level i at
/// i * omega_qubit. The Jaynes-Cummings coupling is static only when both
/// subsystems share one frame frequency.
struct RotatingFrame {
    double omega_res = 0;
    double omega_qubit = 0;

    static RotatingFrame pump(double omega_p) { return {omega_p, omega_p}; }
    static RotatingFrame lab() { return {0.0, 0.0}; }
    bool shared() const { return omega_res == omega_qubit; }
};

/// Truncated Fock (x) M-level product space. Basis index = n * m_levels + i.
struct HilbertConfig {
    int n_fock = 0;
    int m_levels = 1;
    RotatingFrame frame;

    int dim() const { return n_fock * m_levels; }
    int index(int n, int i) const { return n * m_levels + i; }

    /// Enforces n_fock >= 4, m_levels >= 1 and the dimension cap (default 420,
    /// overridable through the KERRSIM_MAX_DIM environment variable).
    void validate() const;
};

int max_hilbert_dim();

enum class OpRole { Hamiltonian, Collapse, Observable };

/// Dense operator on the product space, tagged with its role.
struct OperatorMatrix {
    Matrix m;
    HilbertConfig hc;
    OpRole role = OpRole::Observable;
};

bool is_hermitian(const Matrix& m, double rel_tol = 1e-12);

// Elementary operators (dense, product space).
Matrix annihilation_op(const HilbertConfig& hc);   // a (x) 1
Matrix number_op(const HilbertConfig& hc);         // a^dag a (x) 1
Matrix qubit_op(const HilbertConfig& hc, int i, int j);  // 1 (x) |i><j|

/// Suggested Fock truncation for a semiclassical target photon number:
/// ceil(1.5 n_max + 5 sqrt(n_max)), floored at 8.
int suggest_fock_dim(double n_max);

/// First level of the truncation guard band (top ~20% of the Fock ladder,
/// at least 3 levels). The resonator detuning diagonal is frozen there: the
/// population checks keep those levels empty, and without the freeze their
/// Kerr shifts would force the explicit stepper far below the physical
/// timescales.
inline int guard_band_start(int n_fock) {
    const int band = n_fock / 5 > 3 ? n_fock / 5 : 3;
    return n_fock - band;
}

namespace detail {

/// Operator stored as its nonzero diagonals: entry (r, r + offset) = w[r - r0]
/// for r in [r0, r0 + len). Multiplication against dense matrices walks
/// columns, so both left and right application stream memory contiguously.
struct BandedOperator {
    struct Band {
        int offset = 0;
        int r0 = 0;
        Eigen::VectorXcd w;
    };
    int dim = 0;
    std::vector<Band> bands;
    Matrix dense_fallback;  // used when the operator is not band-sparse
    bool use_dense = false;

    static BandedOperator from_dense(const Matrix& m, double tol = 0.0);
    Matrix dense() const;
    BandedOperator adjoint() const;
    bool empty() const { return !use_dense && bands.empty(); }

    /// y += alpha * B * x
    void apply_left(cplx alpha, const Matrix& x, Matrix& y) const;
    /// y += alpha * x * B
    void apply_right(cplx alpha, const Matrix& x, Matrix& y) const;
};

}  // namespace detail
}  // namespace kerrsim
