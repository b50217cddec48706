#include "kerrsim/fits.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace kerrsim {

namespace detail {

double levenberg_marquardt(const std::function<double(double, const std::vector<double>&)>& f,
                           const std::vector<double>& x, const std::vector<double>& y,
                           std::vector<double>& p, int max_iter) {
    const int m = static_cast<int>(x.size());
    const int k = static_cast<int>(p.size());
    if (m < k) throw FitError("levenberg_marquardt: fewer points than parameters");

    auto residuals = [&](const std::vector<double>& pp, Eigen::VectorXd& r) {
        for (int i = 0; i < m; ++i) r(i) = y[i] - f(x[i], pp);
        return r.squaredNorm();
    };

    std::vector<double> typical(p.size());
    for (int j = 0; j < k; ++j) typical[j] = std::max(1e-12, std::abs(p[j]));

    Eigen::VectorXd r(m), r_try(m);
    Eigen::MatrixXd jac(m, k);
    double cost = residuals(p, r);
    double lambda = 1e-3;

    for (int iter = 0; iter < max_iter; ++iter) {
        // forward-difference Jacobian of the residuals
        for (int j = 0; j < k; ++j) {
            std::vector<double> pp = p;
            const double h = 1e-7 * (std::abs(p[j]) + typical[j]);
            pp[j] += h;
            for (int i = 0; i < m; ++i) jac(i, j) = ((y[i] - f(x[i], pp)) - r(i)) / h;
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * r;
        if (jtr.cwiseAbs().maxCoeff() < 1e-14 * std::max(1.0, cost)) break;

        bool accepted = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            Eigen::MatrixXd a = jtj;
            for (int j = 0; j < k; ++j) a(j, j) += lambda * std::max(jtj(j, j), 1e-30);
            const Eigen::VectorXd delta = a.ldlt().solve(-jtr);
            std::vector<double> p_try = p;
            for (int j = 0; j < k; ++j) p_try[j] += delta(j);
            const double cost_try = residuals(p_try, r_try);
            if (std::isfinite(cost_try) && cost_try < cost) {
                const double rel_drop = (cost - cost_try) / std::max(cost, 1e-300);
                p = std::move(p_try);
                r = r_try;
                cost = cost_try;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
                if (rel_drop < 1e-12) iter = max_iter;  // converged
                break;
            }
            lambda *= 8.0;
        }
        if (!accepted) break;  // stuck in a flat region; keep the best point
    }
    if (!std::isfinite(cost)) throw FitError("levenberg_marquardt: diverged");
    return std::sqrt(cost / m);
}

}  // namespace detail

namespace {

void require_points(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw FitError("fit: x/y size mismatch");
    if (x.size() < 8) throw FitError("fit: need at least 8 points spanning the feature");
}

double interp_crossing(const std::vector<double>& x, const std::vector<double>& y, double level) {
    for (size_t i = 1; i < x.size(); ++i) {
        const double a = y[i - 1] - level, b = y[i] - level;
        if ((a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0)) {
            if (a == b) return x[i - 1];
            return x[i - 1] + (x[i] - x[i - 1]) * a / (a - b);
        }
    }
    return 0.5 * (x.front() + x.back());
}

}  // namespace

double ErfFit::eval(double x) const {
    const double z = (x - center) / (width * std::sqrt(2.0));
    return floor + (ceiling - floor) * 0.5 * (1.0 + std::erf(z));
}

double DampedSineFit::eval(double x) const {
    return amplitude * std::exp(-x / decay) * std::sin(2.0 * M_PI * frequency * x + phase) + offset;
}

LorentzianFit lorentzian_fit(const std::vector<double>& x, const std::vector<double>& y) {
    require_points(x, y);
    const auto [mn_it, mx_it] = std::minmax_element(y.begin(), y.end());
    const double y_min = *mn_it, y_max = *mx_it;
    const size_t peak_idx = static_cast<size_t>(mx_it - y.begin());

    std::vector<double> p = {x[peak_idx], 0.0, y_max - y_min, y_min};
    // fwhm estimate from half-maximum crossings around the peak
    const double half = y_min + 0.5 * (y_max - y_min);
    double lo = x.front(), hi = x.back();
    for (size_t i = peak_idx; i-- > 0;)
        if (y[i] < half) {
            lo = x[i];
            break;
        }
    for (size_t i = peak_idx + 1; i < x.size(); ++i)
        if (y[i] < half) {
            hi = x[i];
            break;
        }
    p[1] = std::max(hi - lo, 1e-3 * std::abs(x.back() - x.front()));

    auto model = [](double xv, const std::vector<double>& pp) {
        const double hw = 0.5 * pp[1];
        return pp[3] + pp[2] * hw * hw / ((xv - pp[0]) * (xv - pp[0]) + hw * hw);
    };
    LorentzianFit fit;
    fit.rms = detail::levenberg_marquardt(model, x, y, p);
    fit.center = p[0];
    fit.fwhm = std::abs(p[1]);
    fit.amplitude = p[2];
    fit.offset = p[3];
    return fit;
}

ErfFit erf_fit(const std::vector<double>& x, const std::vector<double>& y) {
    require_points(x, y);
    const double y_min = *std::min_element(y.begin(), y.end());
    const double y_max = *std::max_element(y.begin(), y.end());

    const double q25 = y_min + 0.25 * (y_max - y_min);
    const double q75 = y_min + 0.75 * (y_max - y_min);
    const double x25 = interp_crossing(x, y, q25);
    const double x75 = interp_crossing(x, y, q75);
    std::vector<double> p = {interp_crossing(x, y, 0.5 * (y_min + y_max)),
                             std::max(std::abs(x75 - x25) / 1.349, 1e-4 * std::abs(x.back() - x.front())),
                             y_min, y_max};

    auto model = [](double xv, const std::vector<double>& pp) {
        const double z = (xv - pp[0]) / (pp[1] * std::sqrt(2.0));
        return pp[2] + (pp[3] - pp[2]) * 0.5 * (1.0 + std::erf(z));
    };
    ErfFit fit;
    fit.rms = detail::levenberg_marquardt(model, x, y, p);
    fit.center = p[0];
    fit.width = std::abs(p[1]);
    fit.floor = p[2];
    fit.ceiling = p[3];
    return fit;
}

DampedSineFit damped_sine_fit(const std::vector<double>& x, const std::vector<double>& y) {
    require_points(x, y);
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    const double y_min = *std::min_element(y.begin(), y.end());
    const double y_max = *std::max_element(y.begin(), y.end());

    // frequency from sign changes of the demeaned signal
    int crossings = 0;
    for (size_t i = 1; i < y.size(); ++i)
        if ((y[i - 1] - mean) * (y[i] - mean) < 0.0) ++crossings;
    const double span = x.back() - x.front();
    double f0 = crossings > 0 ? 0.5 * crossings / span : 1.0 / span;

    const double a0 = std::max(0.5 * (y_max - y_min), 1e-12);
    double s0 = (y.front() - mean) / a0;
    s0 = std::clamp(s0, -1.0, 1.0);
    std::vector<double> p = {a0, f0, span, std::asin(s0), mean};

    auto model = [](double xv, const std::vector<double>& pp) {
        return pp[0] * std::exp(-xv / pp[2]) * std::sin(2.0 * M_PI * pp[1] * xv + pp[3]) + pp[4];
    };
    DampedSineFit fit;
    fit.rms = detail::levenberg_marquardt(model, x, y, p);
    fit.amplitude = p[0];
    fit.frequency = std::abs(p[1]);
    fit.decay = p[2];
    fit.phase = p[3];
    fit.offset = p[4];
    return fit;
}

}  // namespace kerrsim
