#include "specstat/bessel.hpp"

#include <cmath>
#include <numbers>

#include "specstat/core.hpp"

namespace specstat::bessel {

namespace {

// Ascending power series; safe up to x ~ 8 where cancellation costs only a
// few digits.
double j_series(unsigned n, double x) {
  const double halfx = 0.5 * x;
  const double log_t0 = n * std::log(halfx) - std::lgamma(static_cast<double>(n) + 1.0);
  if (log_t0 < -700.0) return 0.0;
  double term = std::exp(log_t0);
  double sum = term;
  const double q = halfx * halfx;
  for (unsigned k = 1; k <= 200; ++k) {
    term *= -q / (static_cast<double>(k) * (static_cast<double>(n) + k));
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum) + 1e-300) break;
  }
  return sum;
}

// Miller downward recurrence normalized with J_0 + 2*sum_k J_{2k} = 1.
double j_miller(unsigned n, double x) {
  const unsigned scale = std::max<unsigned>(n, static_cast<unsigned>(x));
  unsigned m = scale + 24 + static_cast<unsigned>(2.5 * std::sqrt(static_cast<double>(scale) + 1.0));
  if (m % 2 == 1) ++m;
  const double tox = 2.0 / x;
  double bjp = 0.0;
  double bj = 1e-30;
  double ans = 0.0;
  double sum = 0.0;
  bool accumulate = false;
  for (unsigned k = m; k >= 1; --k) {
    const double bjm = k * tox * bj - bjp;
    bjp = bj;
    bj = bjm;
    if (std::fabs(bj) > 1e100) {
      bj *= 1e-100;
      bjp *= 1e-100;
      ans *= 1e-100;
      sum *= 1e-100;
    }
    if (accumulate) sum += bj;
    accumulate = !accumulate;
    if (k == n) ans = bjp;
  }
  sum = 2.0 * sum - bj;  // = J_0 + 2 (J_2 + J_4 + ...)
  if (n == 0) ans = bj;
  return ans / sum;
}

}  // namespace

double j(unsigned order, double x) {
  if (!(x > 0.0)) throw Error("domain-error", "bessel_j requires x > 0");
  if (order > kMaxOrder) throw Error("domain-error", "bessel_j order above configured max");
  if (x <= 8.0 && order <= 60) return j_series(order, x);
  return j_miller(order, x);
}

double j_derivative(unsigned order, double x) {
  if (order == 0) return -j(1, x);
  return j(order - 1, x) - (static_cast<double>(order) / x) * j(order, x);
}

double mcmahon_zero_estimate(unsigned order, unsigned k) {
  const double mu = 4.0 * static_cast<double>(order) * order;
  const double beta = (static_cast<double>(k) + 0.5 * order - 0.25) * std::numbers::pi;
  const double b8 = 8.0 * beta;
  return beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
}

namespace {

double refine_zero(unsigned order, double lo, double hi) {
  double flo = j(order, lo);
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double fx = j(order, x);
    if (fx == 0.0) return x;
    // Maintain the bracket.
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double dfx = j_derivative(order, x);
    double next = x - fx / dfx;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);  // bisection fallback
    const double step = std::fabs(next - x);
    x = next;
    if (step < 1e-11 && hi - lo < 1e-9) return x;
  }
  throw Error("zero-finder-failure", "Bessel zero did not converge");
}

}  // namespace

std::vector<double> zeros_below(unsigned order, double xmax) {
  std::vector<double> zeros;
  // J_order > 0 on (0, j_{order,1}) and j_{order,1} > order, so scanning from
  // just below the order is safe; consecutive zeros are > pi apart for
  // order >= 1, so a 1.5-step scan cannot skip a sign change.
  const double step = 1.5;
  double x = std::max(0.25, static_cast<double>(order) - 0.5);
  if (x >= xmax) return zeros;
  double fx = j(order, x);
  while (x < xmax) {
    const double xn = std::min(x + step, xmax);
    const double fn = j(order, xn);
    if (fx == 0.0) {
      zeros.push_back(x);
    } else if ((fx > 0.0) != (fn > 0.0)) {
      const double z = refine_zero(order, x, xn);
      if (z < xmax) zeros.push_back(z);
    }
    if (xn >= xmax) break;
    x = xn;
    fx = fn;
  }
  return zeros;
}

double zero(unsigned order, unsigned k) {
  if (k < 1) throw Error("domain-error", "zero index k must be >= 1");
  double xmax = std::max(mcmahon_zero_estimate(order, k) + 5.0,
                         static_cast<double>(order) + 4.0 * k + 4.0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const auto zs = zeros_below(order, xmax);
    if (zs.size() >= k) return zs[k - 1];
    xmax *= 1.5;
  }
  throw Error("zero-finder-failure", "failed to enumerate enough Bessel zeros");
}

}  // namespace specstat::bessel
