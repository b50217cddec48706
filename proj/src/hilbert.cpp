#include "kerrsim/hilbert.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace kerrsim {

int max_hilbert_dim() {
    if (const char* env = std::getenv("KERRSIM_MAX_DIM")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 420;
}

void HilbertConfig::validate() const {
    if (n_fock < 4) throw std::domain_error("HilbertConfig: n_fock must be >= 4");
    if (m_levels < 1) throw std::domain_error("HilbertConfig: m_levels must be >= 1");
    if (dim() > max_hilbert_dim())
        throw std::domain_error("HilbertConfig: dimension " + std::to_string(dim()) +
                                " exceeds the cap " + std::to_string(max_hilbert_dim()) +
                                " (KERRSIM_MAX_DIM)");
}

bool is_hermitian(const Matrix& m, double rel_tol) {
    const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Matrix annihilation_op(const HilbertConfig& hc) {
    Matrix a = Matrix::Zero(hc.dim(), hc.dim());
    for (int n = 1; n < hc.n_fock; ++n)
        for (int i = 0; i < hc.m_levels; ++i)
            a(hc.index(n - 1, i), hc.index(n, i)) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix number_op(const HilbertConfig& hc) {
    Matrix nop = Matrix::Zero(hc.dim(), hc.dim());
    for (int n = 0; n < hc.n_fock; ++n)
        for (int i = 0; i < hc.m_levels; ++i) nop(hc.index(n, i), hc.index(n, i)) = n;
    return nop;
}

Matrix qubit_op(const HilbertConfig& hc, int i, int j) {
    if (i < 0 || j < 0 || i >= hc.m_levels || j >= hc.m_levels)
        throw std::domain_error("qubit_op: level index out of range");
    Matrix p = Matrix::Zero(hc.dim(), hc.dim());
    for (int n = 0; n < hc.n_fock; ++n) p(hc.index(n, i), hc.index(n, j)) = 1.0;
    return p;
}

int suggest_fock_dim(double n_max) {
    if (n_max < 0.0) throw std::domain_error("suggest_fock_dim: n_max must be >= 0");
    return std::max(8, static_cast<int>(std::ceil(1.5 * n_max + 5.0 * std::sqrt(n_max))));
}

namespace detail {

BandedOperator BandedOperator::from_dense(const Matrix& m, double tol) {
    BandedOperator op;
    op.dim = static_cast<int>(m.rows());
    const double scale = m.cwiseAbs().maxCoeff();
    const double cut = tol > 0.0 ? tol * scale : 0.0;

    for (int d = -(op.dim - 1); d <= op.dim - 1; ++d) {
        const int r0 = std::max(0, -d);
        const int r1 = std::min(op.dim, op.dim - d);
        int lo = -1, hi = -1;
        for (int r = r0; r < r1; ++r) {
            if (std::abs(m(r, r + d)) > cut) {
                if (lo < 0) lo = r;
                hi = r;
            }
        }
        if (lo < 0) continue;
        Band band;
        band.offset = d;
        band.r0 = lo;
        band.w = Eigen::VectorXcd(hi - lo + 1);
        for (int r = lo; r <= hi; ++r) band.w(r - lo) = m(r, r + d);
        op.bands.push_back(std::move(band));
    }
    // Pathologically dense operators fall back to plain matrix products.
    if (op.bands.size() > 24) {
        op.use_dense = true;
        op.dense_fallback = m;
        op.bands.clear();
    }
    return op;
}

Matrix BandedOperator::dense() const {
    if (use_dense) return dense_fallback;
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& b : bands)
        for (int k = 0; k < b.w.size(); ++k) m(b.r0 + k, b.r0 + k + b.offset) = b.w(k);
    return m;
}

BandedOperator BandedOperator::adjoint() const {
    if (use_dense) return from_dense(dense_fallback.adjoint());
    BandedOperator out;
    out.dim = dim;
    for (const auto& b : bands) {
        Band t;
        t.offset = -b.offset;
        t.r0 = b.r0 + b.offset;  // (r, r+d) -> (r+d, r)
        t.w = b.w.conjugate();
        out.bands.push_back(std::move(t));
    }
    return out;
}

void BandedOperator::apply_left(cplx alpha, const Matrix& x, Matrix& y) const {
    if (use_dense) {
        y.noalias() += alpha * dense_fallback * x;
        return;
    }
    const int ncols = static_cast<int>(x.cols());
    for (const auto& b : bands) {
        const int len = static_cast<int>(b.w.size());
        const cplx* w = b.w.data();
        for (int c = 0; c < ncols; ++c) {
            const cplx* xc = x.col(c).data() + b.r0 + b.offset;
            cplx* yc = y.col(c).data() + b.r0;
            for (int k = 0; k < len; ++k) yc[k] += alpha * w[k] * xc[k];
        }
    }
}

void BandedOperator::apply_right(cplx alpha, const Matrix& x, Matrix& y) const {
    if (use_dense) {
        y.noalias() += alpha * x * dense_fallback;
        return;
    }
    const int nrows = static_cast<int>(x.rows());
    for (const auto& b : bands) {
        const int len = static_cast<int>(b.w.size());
        const cplx* w = b.w.data();
        // column k of x feeds column k + offset of y with weight w[k - r0]
        for (int k = 0; k < len; ++k) {
            const cplx aw = alpha * w[k];
            const cplx* xc = x.col(b.r0 + k).data();
            cplx* yc = y.col(b.r0 + k + b.offset).data();
            for (int r = 0; r < nrows; ++r) yc[r] += aw * xc[r];
        }
    }
}

}  // namespace detail
}  // namespace kerrsim
