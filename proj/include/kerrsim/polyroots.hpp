#pragma once

#include <vector>

namespace kerrsim::detail {

/// Real polynomial with ascending coefficients: p(x) = c[0] + c[1] x + ...
double polyval(const std::vector<double>& c, double x);

std::vector<double> polyder(const std::vector<double>& c);

/// All real roots of p on [lo, hi], ascending, found by recursive bracketing
/// between the critical points of p (roots of p') and bisection + Newton
/// polish on each monotone piece. Relative tolerance ~1e-14.
std::vector<double> real_roots_in(const std::vector<double>& c, double lo, double hi);

}  // namespace kerrsim::detail
