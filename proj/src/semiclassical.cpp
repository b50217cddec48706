#include "kerrsim/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kerrsim/constants.hpp"
#include "kerrsim/polyroots.hpp"

namespace kerrsim {

namespace {

using cplx = std::complex<double>;

// Coefficients (ascending in n) of eps^2(n) = n [ (delta + K n + K' n^2)^2 + kappa^2/4 ].
std::vector<double> response_poly(double delta, double kappa, double k, double kp) {
    return {0.0,
            delta * delta + 0.25 * kappa * kappa,
            2.0 * delta * k,
            k * k + 2.0 * delta * kp,
            2.0 * k * kp,
            kp * kp};
}

double upper_root_bound(const std::vector<double>& c) {
    size_t lead = c.size();
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    while (lead > 1 && std::abs(c[lead - 1]) < 1e-14 * scale) --lead;
    if (lead <= 1) return 1.0;
    double m = 0.0;
    for (size_t k = 0; k + 1 < lead; ++k) m = std::max(m, std::abs(c[k] / c[lead - 1]));
    return 1.0 + m;
}

}  // namespace

std::string to_string(Branch b) {
    switch (b) {
        case Branch::L: return "L";
        case Branch::H: return "H";
        default: return "unstable";
    }
}

double reduced_detuning(double omega_p, const KerrParameters& kerr) {
    return 2.0 * (kerr.omega_r - omega_p) / kerr.kappa;
}

double pump_frequency(double omega_reduced, const KerrParameters& kerr) {
    return kerr.omega_r - 0.5 * omega_reduced * kerr.kappa;
}

std::vector<SteadyStateSolution> steady_states_detuned(double delta, double kappa, double kerr_k,
                                                       double kerr_kp, cplx epsilon) {
    if (kappa <= 0.0) throw std::domain_error("steady_states: kappa must be > 0");
    std::vector<SteadyStateSolution> out;
    const double eps2 = std::norm(epsilon);
    if (eps2 == 0.0) {
        out.push_back({cplx(0.0, 0.0), 0.0, true, Branch::L});
        return out;
    }

    std::vector<double> poly = response_poly(delta, kappa, kerr_k, kerr_kp);
    poly[0] -= eps2;

    std::vector<double> roots;
    if (kerr_k == 0.0 && kerr_kp == 0.0) {
        roots.push_back(eps2 / (delta * delta + 0.25 * kappa * kappa));
    } else {
        roots = detail::real_roots_in(poly, 0.0, upper_root_bound(poly));
    }

    const std::vector<double> dpoly = detail::polyder(poly);
    for (double n : roots) {
        if (n < 0.0) continue;
        SteadyStateSolution sol;
        sol.n = n;
        // back-substitution: alpha = -eps / (delta + K n + K' n^2 - i kappa/2)
        const cplx denom(delta + kerr_k * n + kerr_kp * n * n, -0.5 * kappa);
        sol.alpha = -epsilon / denom;
        sol.n = std::norm(sol.alpha);
        sol.stable = detail::polyval(dpoly, n) > 0.0;
        out.push_back(sol);
    }
    std::sort(out.begin(), out.end(),
              [](const SteadyStateSolution& a, const SteadyStateSolution& b) { return a.n < b.n; });
    // Branch labels. A lone stable root above the fold region is the
    // continuation of the high-amplitude branch, not L.
    std::vector<double> folds = detail::real_roots_in(detail::polyder(
                                    response_poly(delta, kappa, kerr_k, kerr_kp)),
                                0.0, upper_root_bound(poly));
    folds.erase(std::remove_if(folds.begin(), folds.end(), [](double n) { return n <= 0.0; }),
                folds.end());
    bool first_stable = true;
    for (auto& s : out) {
        if (!s.stable) {
            s.branch = Branch::Unstable;
            continue;
        }
        if (!folds.empty() && s.n > folds.back()) {
            s.branch = Branch::H;
        } else {
            s.branch = first_stable ? Branch::L : Branch::H;
        }
        first_stable = false;
    }
    return out;
}

std::vector<SteadyStateSolution> steady_states(double omega_reduced, cplx epsilon_p,
                                               const KerrParameters& kerr, bool include_kp) {
    const double delta = 0.5 * omega_reduced * kerr.kappa;
    return steady_states_detuned(delta, kerr.kappa, kerr.K, include_kp ? kerr.Kp : 0.0, epsilon_p);
}

std::optional<std::pair<double, double>> bifurcation_thresholds(double omega_reduced,
                                                                const KerrParameters& kerr,
                                                                bool include_kp) {
    const double delta = 0.5 * omega_reduced * kerr.kappa;
    const double kp = include_kp ? kerr.Kp : 0.0;
    if (kerr.K == 0.0 && kp == 0.0) return std::nullopt;

    const std::vector<double> q = response_poly(delta, kerr.kappa, kerr.K, kp);
    const std::vector<double> dq = detail::polyder(q);
    std::vector<double> folds = detail::real_roots_in(dq, 0.0, upper_root_bound(q));
    folds.erase(std::remove_if(folds.begin(), folds.end(), [](double n) { return n <= 0.0; }),
                folds.end());
    if (folds.size() < 2) return std::nullopt;

    // eps^2 has a local max at the first fold (end of L branch, upper
    // threshold) and a local min at the second (end of H branch).
    const double eps_plus = std::sqrt(detail::polyval(q, folds.front()));
    const double eps_minus = std::sqrt(detail::polyval(q, folds.back()));
    if (!(eps_minus < eps_plus)) return std::nullopt;
    return std::make_pair(eps_minus, eps_plus);
}

CriticalPoint critical_point(const KerrParameters& kerr) {
    if (kerr.K == 0.0) throw std::domain_error("critical_point: linear resonator has no bifurcation");
    CriticalPoint cp;
    cp.omega_c = std::sqrt(3.0);
    const double delta_c = 0.5 * cp.omega_c * kerr.kappa;
    cp.n_c = -2.0 * delta_c / (3.0 * kerr.K);
    const std::vector<double> q = response_poly(delta_c, kerr.kappa, kerr.K, 0.0);
    cp.epsilon_c = std::sqrt(detail::polyval(q, cp.n_c));
    return cp;
}

GainResult small_signal_gain(double omega_reduced, cplx epsilon_p, const KerrParameters& kerr,
                             Branch branch, bool include_kp) {
    const auto sols = steady_states(omega_reduced, epsilon_p, kerr, include_kp);
    std::optional<SteadyStateSolution> sel;
    if (sols.size() == 1 && sols.front().stable) {
        sel = sols.front();
    } else {
        sel = pick_branch(sols, branch);
    }
    if (!sel) throw std::domain_error("small_signal_gain: requested branch absent at this point");

    const double delta = 0.5 * omega_reduced * kerr.kappa;
    const double k = kerr.K;
    const double kp = include_kp ? kerr.Kp : 0.0;
    const cplx alpha = sel->alpha;
    const double n = sel->n;

    // F = (delta - i kappa/2) alpha + K |alpha|^2 alpha + K' |alpha|^4 alpha + eps
    const cplx a(delta + 2.0 * k * n + 3.0 * kp * n * n, -0.5 * kerr.kappa);
    const cplx b = (k + 2.0 * kp * n) * alpha * alpha;
    const double det = std::norm(a) - std::norm(b);
    const double scale = std::norm(a) + std::norm(b);

    GainResult res;
    if (std::abs(det) < 1e-12 * scale) {
        res.diverged = true;
        res.gain = std::numeric_limits<double>::infinity();
        return res;
    }
    const cplx dalpha = (b - std::conj(a)) / det;
    res.gain = std::abs(dalpha) * 0.5 * kerr.kappa;
    return res;
}

double junction_current(cplx alpha, const KerrParameters& kerr) {
    return std::sqrt(constants().hbar / (M_PI * kerr.z0)) * kerr.omega_r * std::abs(alpha);
}

std::optional<SteadyStateSolution> pick_branch(const std::vector<SteadyStateSolution>& sols,
                                               Branch branch) {
    for (const auto& s : sols)
        if (s.branch == branch) return s;
    return std::nullopt;
}

}  // namespace kerrsim
