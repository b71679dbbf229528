#pragma once

#include <vector>

namespace specstat::bessel {

inline constexpr unsigned kMaxOrder = 4000;

/// J_n(x) for x > 0, relative accuracy ~1e-12 away from zeros.
/// Power series at small argument, Miller downward recurrence otherwise.
double j(unsigned order, double x);

/// J_n'(x) via J_{n-1}(x) - (n/x) J_n(x)  (and -J_1 for n = 0).
double j_derivative(unsigned order, double x);

/// McMahon large-argument estimate of the k-th positive zero (k >= 1).
double mcmahon_zero_estimate(unsigned order, unsigned k);

/// All positive zeros of J_order below xmax, ascending.  Sign-change scan
/// seeded from the order bound j_{n,1} > n, then safeguarded Newton with
/// bisection fallback; throws Error("zero-finder-failure") on non-convergence.
std::vector<double> zeros_below(unsigned order, double xmax);

/// The k-th positive zero (k >= 1).
double zero(unsigned order, unsigned k);

}  // namespace specstat::bessel
