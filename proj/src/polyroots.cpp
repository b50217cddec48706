#include "kerrsim/polyroots.hpp"

#include <algorithm>
#include <cmath>

namespace kerrsim::detail {

double polyval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

std::vector<double> polyder(const std::vector<double>& c) {
    std::vector<double> d;
    for (size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
    return d;
}

namespace {

std::vector<double> trim_leading(std::vector<double> c) {
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return {0.0};
    while (c.size() > 1 && std::abs(c.back()) < 1e-14 * scale) c.pop_back();
    return c;
}

double bisect_refine(const std::vector<double>& c, double a, double b, double fa, double fb) {
    // fa, fb have opposite signs (or one is zero)
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double fm = polyval(c, m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) != (fm < 0.0)) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
        if (b - a < 1e-14 * std::max(1.0, std::abs(m))) break;
    }
    // Newton polish inside the bracket
    double x = 0.5 * (a + b);
    const std::vector<double> d = polyder(c);
    for (int it = 0; it < 8; ++it) {
        const double f = polyval(c, x);
        const double df = polyval(d, x);
        if (df == 0.0) break;
        const double xn = x - f / df;
        if (xn < a || xn > b) break;
        if (xn == x) break;
        x = xn;
    }
    return x;
}

}  // namespace

std::vector<double> real_roots_in(const std::vector<double>& c_in, double lo, double hi) {
    const std::vector<double> c = trim_leading(c_in);
    std::vector<double> roots;
    if (c.size() <= 1) return roots;  // constant: no isolated roots
    if (c.size() == 2) {
        const double r = -c[0] / c[1];
        if (r >= lo && r <= hi) roots.push_back(r);
        return roots;
    }

    std::vector<double> knots = real_roots_in(polyder(c), lo, hi);
    knots.insert(knots.begin(), lo);
    knots.push_back(hi);
    std::sort(knots.begin(), knots.end());

    for (size_t k = 0; k + 1 < knots.size(); ++k) {
        const double a = knots[k], b = knots[k + 1];
        if (b <= a) continue;
        const double fa = polyval(c, a), fb = polyval(c, b);
        if (fa == 0.0) {
            if (roots.empty() || std::abs(roots.back() - a) > 1e-12 * std::max(1.0, std::abs(a)))
                roots.push_back(a);
            continue;
        }
        if ((fa < 0.0) != (fb <= 0.0)) {
            const double r = bisect_refine(c, a, b, fa, fb);
            if (roots.empty() || std::abs(roots.back() - r) > 1e-12 * std::max(1.0, std::abs(r)))
                roots.push_back(r);
        }
    }
    const double fend = polyval(c, hi);
    if (fend == 0.0 &&
        (roots.empty() || std::abs(roots.back() - hi) > 1e-12 * std::max(1.0, std::abs(hi))))
        roots.push_back(hi);
    return roots;
}

}  // namespace kerrsim::detail
