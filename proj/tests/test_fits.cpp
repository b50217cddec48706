#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kerrsim/fits.hpp"

using namespace kerrsim;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    return v;
}

}  // namespace

TEST_CASE("exact lorentzian recovery") {
    LorentzianFit truth;
    truth.center = 3.2;
    truth.fwhm = 0.8;
    truth.amplitude = 2.5;
    truth.offset = 0.3;
    const auto x = linspace(0.0, 6.0, 61);
    std::vector<double> y;
    for (double xv : x) y.push_back(truth.eval(xv));

    const auto fit = lorentzian_fit(x, y);
    CHECK(fit.center == doctest::Approx(truth.center).epsilon(1e-8));
    CHECK(fit.fwhm == doctest::Approx(truth.fwhm).epsilon(1e-8));
    CHECK(fit.amplitude == doctest::Approx(truth.amplitude).epsilon(1e-8));
    CHECK(fit.offset == doctest::Approx(truth.offset).epsilon(1e-8));
    CHECK(fit.rms < 1e-10);
}

TEST_CASE("exact erf recovery") {
    ErfFit truth;
    truth.center = -1.0;
    truth.width = 0.35;
    truth.floor = 0.02;
    truth.ceiling = 0.97;
    const auto x = linspace(-3.0, 1.0, 41);
    std::vector<double> y;
    for (double xv : x) y.push_back(truth.eval(xv));

    const auto fit = erf_fit(x, y);
    CHECK(fit.center == doctest::Approx(truth.center).epsilon(1e-8));
    CHECK(fit.width == doctest::Approx(truth.width).epsilon(1e-8));
    CHECK(fit.floor == doctest::Approx(truth.floor).epsilon(1e-6));
    CHECK(fit.ceiling == doctest::Approx(truth.ceiling).epsilon(1e-6));
    CHECK(fit.rms < 1e-10);
}

TEST_CASE("exact damped sine recovery") {
    DampedSineFit truth;
    truth.amplitude = 0.45;
    truth.frequency = 2.2;
    truth.decay = 1.7;
    truth.phase = 0.4;
    truth.offset = 0.5;
    const auto x = linspace(0.0, 3.0, 121);
    std::vector<double> y;
    for (double xv : x) y.push_back(truth.eval(xv));

    const auto fit = damped_sine_fit(x, y);
    CHECK(fit.amplitude == doctest::Approx(truth.amplitude).epsilon(1e-7));
    CHECK(fit.frequency == doctest::Approx(truth.frequency).epsilon(1e-7));
    CHECK(fit.decay == doctest::Approx(truth.decay).epsilon(1e-6));
    CHECK(fit.offset == doctest::Approx(truth.offset).epsilon(1e-7));
    CHECK(fit.rms < 1e-9);
}

TEST_CASE("lorentzian center under 1% noise: Monte Carlo over 100 seeds") {
    LorentzianFit truth;
    truth.center = 5.0;
    truth.fwhm = 1.2;
    truth.amplitude = 1.0;
    truth.offset = 0.1;
    const auto x = linspace(2.0, 8.0, 81);

    int failures = 0;
    for (unsigned seed = 0; seed < 100; ++seed) {
        std::mt19937 rng(seed);
        std::normal_distribution<double> noise(0.0, 0.01);
        std::vector<double> y;
        for (double xv : x) y.push_back(truth.eval(xv) + noise(rng));
        const auto fit = lorentzian_fit(x, y);
        if (std::abs(fit.center - truth.center) > 0.02 * truth.fwhm) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("insufficient points rejected") {
    const std::vector<double> x = {0, 1, 2, 3};
    const std::vector<double> y = {0, 1, 0, 1};
    CHECK_THROWS_AS(lorentzian_fit(x, y), FitError);
    CHECK_THROWS_AS(erf_fit(x, y), FitError);
    CHECK_THROWS_AS(damped_sine_fit(x, y), FitError);
    CHECK_THROWS_AS(lorentzian_fit({0, 1, 2}, {0, 1}), FitError);
}
