#include "kerrsim/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace kerrsim {

namespace {

constexpr cplx kI(0.0, 1.0);

double gershgorin_bound(const Matrix& m) {
    double bound = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) bound = std::max(bound, m.row(r).cwiseAbs().sum());
    return bound;
}

}  // namespace

DensityMatrixCheck check_density_matrix(const DensityMatrix& rho, bool with_eigenvalues) {
    DensityMatrixCheck c;
    c.trace_error = std::abs(rho.rho.trace() - 1.0);
    const double scale = std::max(1e-300, rho.rho.cwiseAbs().maxCoeff());
    c.hermiticity_error = (rho.rho - rho.rho.adjoint()).cwiseAbs().maxCoeff() / scale;
    if (with_eigenvalues) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho.rho + rho.rho.adjoint()),
                                                 Eigen::EigenvaluesOnly);
        c.min_eigenvalue = es.eigenvalues().minCoeff();
    }
    return c;
}

Eigen::VectorXcd coherent_state_vector(cplx alpha, int n_fock) {
    Eigen::VectorXcd v(n_fock);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < n_fock; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    return v;
}

DensityMatrix vacuum_state(const HilbertConfig& hc, int qubit_level) {
    return fock_state(hc, 0, qubit_level);
}

DensityMatrix fock_state(const HilbertConfig& hc, int n, int qubit_level) {
    hc.validate();
    if (n < 0 || n >= hc.n_fock || qubit_level < 0 || qubit_level >= hc.m_levels)
        throw std::domain_error("fock_state: index out of range");
    DensityMatrix rho{Matrix::Zero(hc.dim(), hc.dim()), hc};
    rho.rho(hc.index(n, qubit_level), hc.index(n, qubit_level)) = 1.0;
    return rho;
}

DensityMatrix coherent_state(const HilbertConfig& hc, cplx alpha, int qubit_level) {
    const Eigen::VectorXcd v = coherent_state_vector(alpha, hc.n_fock);
    Matrix res = v * v.adjoint();
    res /= res.trace().real();  // renormalize the truncated state
    return product_state(res, hc, qubit_level);
}

DensityMatrix thermal_state(double n_th, const HilbertConfig& hc, int qubit_level) {
    if (n_th < 0.0) throw std::domain_error("thermal_state: n_th must be >= 0");
    Eigen::VectorXd pops = Eigen::VectorXd::Zero(hc.n_fock);
    if (n_th == 0.0) {
        pops(0) = 1.0;
    } else {
        const double x = n_th / (1.0 + n_th);
        double w = 1.0;
        for (int n = 0; n < hc.n_fock; ++n, w *= x) pops(n) = w;
        pops /= pops.sum();
    }
    Matrix res = pops.cast<cplx>().asDiagonal();
    return product_state(res, hc, qubit_level);
}

DensityMatrix product_state(const Matrix& rho_res, const HilbertConfig& hc, int qubit_level) {
    hc.validate();
    if (rho_res.rows() != hc.n_fock || rho_res.cols() != hc.n_fock)
        throw std::domain_error("product_state: resonator block size mismatch");
    if (qubit_level < 0 || qubit_level >= hc.m_levels)
        throw std::domain_error("product_state: qubit level out of range");
    DensityMatrix rho{Matrix::Zero(hc.dim(), hc.dim()), hc};
    for (int n = 0; n < hc.n_fock; ++n)
        for (int m = 0; m < hc.n_fock; ++m)
            rho.rho(hc.index(n, qubit_level), hc.index(m, qubit_level)) = rho_res(n, m);
    return rho;
}

cplx expectation(const Matrix& op, const DensityMatrix& rho) {
    if (op.rows() != rho.rho.rows())
        throw std::domain_error("expectation: dimension mismatch");
    return (op.transpose().cwiseProduct(rho.rho)).sum();  // tr(op rho)
}

DensityMatrix partial_trace_resonator(const DensityMatrix& rho) {
    const HilbertConfig& hc = rho.hc;
    HilbertConfig out_hc{hc.n_fock, 1, hc.frame};
    DensityMatrix out{Matrix::Zero(hc.n_fock, hc.n_fock), out_hc};
    for (int n = 0; n < hc.n_fock; ++n)
        for (int m = 0; m < hc.n_fock; ++m) {
            cplx acc = 0.0;
            for (int i = 0; i < hc.m_levels; ++i) acc += rho.rho(hc.index(n, i), hc.index(m, i));
            out.rho(n, m) = acc;
        }
    return out;
}

double qubit_population(const DensityMatrix& rho, int level) {
    if (level < 0 || level >= rho.hc.m_levels)
        throw std::domain_error("qubit_population: level out of range");
    double p = 0.0;
    for (int n = 0; n < rho.hc.n_fock; ++n)
        p += rho.rho(rho.hc.index(n, level), rho.hc.index(n, level)).real();
    return p;
}

double mean_photon_number(const DensityMatrix& rho) {
    double n_mean = 0.0;
    for (int n = 0; n < rho.hc.n_fock; ++n)
        for (int i = 0; i < rho.hc.m_levels; ++i)
            n_mean += n * rho.rho(rho.hc.index(n, i), rho.hc.index(n, i)).real();
    return n_mean;
}

cplx mean_field(const DensityMatrix& rho) {
    // tr(a rho) = sum_n sqrt(n) sum_i rho((n,i), (n-1,i))
    cplx acc = 0.0;
    for (int n = 1; n < rho.hc.n_fock; ++n)
        for (int i = 0; i < rho.hc.m_levels; ++i)
            acc += std::sqrt(static_cast<double>(n)) * rho.rho(rho.hc.index(n, i), rho.hc.index(n - 1, i));
    return acc;
}

double fock_tail_weight(const DensityMatrix& rho) {
    double w = 0.0;
    for (int n = std::max(0, rho.hc.n_fock - 2); n < rho.hc.n_fock; ++n)
        for (int i = 0; i < rho.hc.m_levels; ++i)
            w += rho.rho(rho.hc.index(n, i), rho.hc.index(n, i)).real();
    return w;
}

OperatorMatrix build_static_hamiltonian(const KerrParameters& kerr,
                                        const TransmonSpectrum* spectrum,
                                        const std::vector<double>& g_list,
                                        const HilbertConfig& hc) {
    hc.validate();
    const int m = hc.m_levels;
    if (spectrum && spectrum->levels() < m)
        throw std::domain_error("build_static_hamiltonian: spectrum has fewer levels than m_levels");
    if (!g_list.empty() && static_cast<int>(g_list.size()) < m - 1)
        throw std::domain_error("build_static_hamiltonian: need g_{i,i+1} for all retained levels");

    bool coupled = false;
    for (double g : g_list)
        if (g != 0.0) coupled = true;
    if (coupled && !hc.frame.shared())
        throw std::domain_error(
            "build_static_hamiltonian: coupled system requires a shared frame frequency "
            "(the Jaynes-Cummings term would be time dependent)");

    Matrix h = Matrix::Zero(hc.dim(), hc.dim());
    const double w_res = kerr.omega_r - hc.frame.omega_res;
    const int n_guard = guard_band_start(hc.n_fock);
    for (int n = 0; n < hc.n_fock; ++n) {
        // detuning frozen over the guard band (see guard_band_start)
        const double nd = n < n_guard ? n : n_guard;
        const double diag_res = w_res * nd + 0.5 * kerr.K * nd * (nd - 1.0) +
                                kerr.Kp / 3.0 * nd * (nd - 1.0) * (nd - 2.0);
        for (int i = 0; i < m; ++i) {
            double diag_qb = 0.0;
            if (spectrum) diag_qb = spectrum->omega(i) - i * hc.frame.omega_qubit;
            h(hc.index(n, i), hc.index(n, i)) = diag_res + diag_qb;
        }
    }
    if (coupled) {
        for (int i = 0; i + 1 < m; ++i) {
            const double g = g_list[i];
            if (g == 0.0) continue;
            for (int n = 1; n < hc.n_fock; ++n) {
                // a^dag |i><i+1|: (n-1, i+1) -> (n, i)
                const double amp = g * std::sqrt(static_cast<double>(n));
                h(hc.index(n, i), hc.index(n - 1, i + 1)) += amp;
                h(hc.index(n - 1, i + 1), hc.index(n, i)) += amp;
            }
        }
    }
    return OperatorMatrix{std::move(h), hc, OpRole::Hamiltonian};
}

TimeDependentHamiltonian make_hamiltonian(OperatorMatrix h0) {
    if (!is_hermitian(h0.m))
        throw std::domain_error("make_hamiltonian: static part is not Hermitian");
    TimeDependentHamiltonian h;
    h.hc = h0.hc;
    h.h0 = std::move(h0);
    return h;
}

void add_drive(TimeDependentHamiltonian& h, const DriveSpec& drive,
               std::function<double(double)> envelope) {
    DriveTerm term;
    term.spec = drive;
    term.envelope = std::move(envelope);
    term.delta = drive.omega_d - h.hc.frame.omega_res;
    h.drives.push_back(std::move(term));
}

std::vector<OperatorMatrix> collapse_operators(const KerrParameters& kerr,
                                               const QubitDissipation& dissipation,
                                               const HilbertConfig& hc) {
    hc.validate();
    if (kerr.kappa < 0.0 || kerr.n_th < 0.0 || dissipation.gamma < 0.0)
        throw std::domain_error("collapse_operators: rates must be >= 0");

    std::vector<OperatorMatrix> ops;
    const Matrix a = annihilation_op(hc);
    if (kerr.kappa > 0.0) {
        ops.push_back({std::sqrt(kerr.kappa * (kerr.n_th + 1.0)) * a, hc, OpRole::Collapse});
        if (kerr.n_th > 0.0)
            ops.push_back({std::sqrt(kerr.kappa * kerr.n_th) * a.adjoint(), hc, OpRole::Collapse});
    }
    if (dissipation.gamma > 0.0) {
        for (int i = 0; i + 1 < hc.m_levels; ++i) {
            const double rate = (i + 1) * dissipation.gamma;  // gamma_{i+1,i}
            ops.push_back({std::sqrt(rate) * qubit_op(hc, i, i + 1), hc, OpRole::Collapse});
        }
    }
    for (int i = 0; i + 1 < hc.m_levels; ++i) {
        const double gphi =
            i < static_cast<int>(dissipation.gamma_phi.size()) ? dissipation.gamma_phi[i] : 0.0;
        if (gphi < 0.0) throw std::domain_error("collapse_operators: gamma_phi must be >= 0");
        if (gphi > 0.0)
            ops.push_back({std::sqrt(2.0 * gphi) * qubit_op(hc, i, i), hc, OpRole::Collapse});
    }
    return ops;
}

namespace {

/// Fixed-step RK4 propagator with banded operator application. The effective
/// non-Hermitian Hamiltonian H - (i/2) sum c^dag c carries the anticommutator
/// part of the dissipators, the sandwich terms c rho c^dag are applied per
/// channel.
class Propagator {
  public:
    Propagator(const TimeDependentHamiltonian& h, const std::vector<OperatorMatrix>& collapse)
        : dim_(h.hc.dim()) {
        Matrix heff = h.h0.m;
        for (const auto& c : collapse) {
            if (c.m.rows() != heff.rows())
                throw std::domain_error("evolve: collapse operator dimension mismatch");
            heff -= 0.5 * kI * (c.m.adjoint() * c.m);
            Channel ch;
            ch.op = detail::BandedOperator::from_dense(c.m);
            ch.op_adj = ch.op.adjoint();
            channels_.push_back(std::move(ch));
        }
        heff_ = detail::BandedOperator::from_dense(heff);
        heff_adj_ = heff_.adjoint();
        // Superoperator spectral-radius estimate: the commutator spans twice
        // the Hermitian part, the dissipator (anticommutator + sandwich) up
        // to four times the anti-Hermitian part.
        const Matrix h_herm = 0.5 * (heff + heff.adjoint());
        const Matrix h_anti = 0.5 * (heff - heff.adjoint());
        norm_bound_ = 2.0 * gershgorin_bound(h_herm) + 4.0 * gershgorin_bound(h_anti);

        for (const auto& d : h.drives) {
            Drive drv;
            const Matrix adag = annihilation_op(h.hc).adjoint();
            drv.op = detail::BandedOperator::from_dense(adag);
            drv.op_adj = drv.op.adjoint();
            drv.eps = d.spec.epsilon;
            drv.delta = d.delta;
            drv.env = d.envelope;
            drives_.push_back(std::move(drv));
            norm_bound_ +=
                4.0 * std::abs(d.spec.epsilon) * std::sqrt(static_cast<double>(h.hc.n_fock));
            max_delta_ = std::max(max_delta_, std::abs(d.delta));
        }
        tmp_.resize(dim_, dim_);
    }

    double suggest_dt() const {
        double dt = 2.0 / std::max(norm_bound_, 1e-300);  // RK4 region reaches ~2.8
        if (max_delta_ > 0.0) dt = std::min(dt, 2.0 * M_PI / max_delta_ / 20.0);
        return dt;
    }

    void rhs(const Matrix& rho, double t, Matrix& out) {
        out.setZero();
        heff_.apply_left(-kI, rho, out);
        heff_adj_.apply_right(kI, rho, out);
        for (const auto& d : drives_) {
            const double env = d.env ? d.env(t) : 1.0;
            if (env == 0.0) continue;
            const cplx c = d.eps * env * std::polar(1.0, -d.delta * t);
            d.op.apply_left(-kI * c, rho, out);
            d.op_adj.apply_left(-kI * std::conj(c), rho, out);
            d.op.apply_right(kI * c, rho, out);
            d.op_adj.apply_right(kI * std::conj(c), rho, out);
        }
        for (const auto& ch : channels_) {
            tmp_.setZero();
            ch.op.apply_left(1.0, rho, tmp_);
            ch.op_adj.apply_right(1.0, tmp_, out);
        }
    }

    void step(Matrix& rho, double t, double h) {
        if (k1_.rows() != dim_) {
            k1_.resize(dim_, dim_);
            k2_.resize(dim_, dim_);
            k3_.resize(dim_, dim_);
            k4_.resize(dim_, dim_);
            stage_.resize(dim_, dim_);
        }
        rhs(rho, t, k1_);
        stage_ = rho + (0.5 * h) * k1_;
        rhs(stage_, t + 0.5 * h, k2_);
        stage_ = rho + (0.5 * h) * k2_;
        rhs(stage_, t + 0.5 * h, k3_);
        stage_ = rho + h * k3_;
        rhs(stage_, t + h, k4_);
        rho += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
        stage_ = rho.adjoint();
        rho = 0.5 * (rho + stage_);
    }

  private:
    struct Channel {
        detail::BandedOperator op, op_adj;
    };
    struct Drive {
        detail::BandedOperator op, op_adj;
        cplx eps;
        double delta;
        std::function<double(double)> env;
    };

    int dim_;
    detail::BandedOperator heff_, heff_adj_;
    std::vector<Channel> channels_;
    std::vector<Drive> drives_;
    double norm_bound_ = 0;
    double max_delta_ = 0;
    Matrix k1_, k2_, k3_, k4_, stage_, tmp_;
};

}  // namespace

EvolveResult evolve(const DensityMatrix& rho0, const TimeDependentHamiltonian& h,
                    const std::vector<OperatorMatrix>& collapse,
                    const std::vector<double>& t_grid, const EvolveOptions& opts) {
    if (t_grid.size() < 2) throw std::domain_error("evolve: t_grid needs at least two points");
    for (size_t k = 1; k < t_grid.size(); ++k)
        if (t_grid[k] <= t_grid[k - 1]) throw std::domain_error("evolve: t_grid must increase");
    if (rho0.rho.rows() != h.hc.dim())
        throw std::domain_error("evolve: state dimension mismatch");

    Propagator prop(h, collapse);
    const double span = t_grid.back() - t_grid.front();
    double dt = opts.dt > 0.0 ? opts.dt : prop.suggest_dt() * opts.dt_scale;
    dt = std::min(dt, span / opts.min_steps);

    EvolveResult result;
    result.diag.dt = dt;
    result.states.push_back(rho0);

    Matrix rho = rho0.rho;
    long check_countdown = opts.check_interval;
    for (size_t seg = 0; seg + 1 < t_grid.size(); ++seg) {
        const double t0 = t_grid[seg], t1 = t_grid[seg + 1];
        const long nsteps = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / dt - 1e-12)));
        const double hstep = (t1 - t0) / nsteps;
        for (long s = 0; s < nsteps; ++s) {
            prop.step(rho, t0 + s * hstep, hstep);
            ++result.diag.steps;
            if (--check_countdown <= 0 || s == nsteps - 1) {
                check_countdown = opts.check_interval;
                const double drift = std::abs(rho.trace().real() - 1.0);
                result.diag.max_trace_drift = std::max(result.diag.max_trace_drift, drift);
                if (!std::isfinite(drift) || drift > opts.trace_tol)
                    throw IntegrationError(
                        "evolve: trace drift " + std::to_string(drift) +
                        " exceeds tolerance; reduce the time step (dt = " + std::to_string(hstep) + ")");
                double tail = 0.0;
                for (int n = std::max(0, h.hc.n_fock - 2); n < h.hc.n_fock; ++n)
                    for (int i = 0; i < h.hc.m_levels; ++i)
                        tail += rho(h.hc.index(n, i), h.hc.index(n, i)).real();
                result.diag.max_fock_tail = std::max(result.diag.max_fock_tail, tail);
                if (tail > opts.fock_tail_tol)
                    throw TruncationError("evolve: top Fock levels hold population " +
                                          std::to_string(tail) + "; increase n_fock");
            }
        }
        result.states.push_back(DensityMatrix{rho, h.hc});
    }
    return result;
}

}  // namespace kerrsim
