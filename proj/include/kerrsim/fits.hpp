#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace kerrsim {

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LorentzianFit {
    double center = 0;
    double fwhm = 0;
    double amplitude = 0;  ///< peak height above the offset
    double offset = 0;
    double rms = 0;

    double eval(double x) const {
        const double hw = 0.5 * fwhm;
        return offset + amplitude * hw * hw / ((x - center) * (x - center) + hw * hw);
    }
};

struct ErfFit {
    double center = 0;
    double width = 0;  ///< gaussian sigma of the underlying error function
    double floor = 0;
    double ceiling = 0;
    double rms = 0;

    double eval(double x) const;
};

struct DampedSineFit {
    double amplitude = 0;
    double frequency = 0;  ///< cycles per x unit
    double decay = 0;      ///< 1/e time in x units
    double phase = 0;
    double offset = 0;
    double rms = 0;

    double eval(double x) const;
};

/// Least-squares fits (Levenberg-Marquardt, numeric Jacobian, deterministic
/// initialization from data extrema/quantiles). All require >= 8 points
/// spanning the feature and throw FitError when the iteration does not
/// converge within its bounded budget.
LorentzianFit lorentzian_fit(const std::vector<double>& x, const std::vector<double>& y);
ErfFit erf_fit(const std::vector<double>& x, const std::vector<double>& y);
DampedSineFit damped_sine_fit(const std::vector<double>& x, const std::vector<double>& y);

namespace detail {

/// Minimizes sum_i (y_i - f(x_i, p))^2 over p. Returns the rms residual.
double levenberg_marquardt(const std::function<double(double, const std::vector<double>&)>& f,
                           const std::vector<double>& x, const std::vector<double>& y,
                           std::vector<double>& p, int max_iter = 300);

}  // namespace detail
}  // namespace kerrsim
