#include "specstat/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "specstat/bessel.hpp"

namespace specstat::spectra {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTieEpsilon = 1e-9;  // in units of the mean spacing
}  // namespace

double WeylCounter::mean_count(double e) const {
  return area_coeff * e - perim_coeff * std::sqrt(e) + const_term;
}

double WeylCounter::derivative(double e) const {
  return area_coeff - 0.5 * perim_coeff / std::sqrt(e);
}

double WeylCounter::monotone_from() const {
  if (perim_coeff <= 0.0) return 0.0;
  const double u = 0.5 * perim_coeff / area_coeff;
  return u * u;
}

double WeylCounter::invert(double n) const {
  // Quadratic in sqrt(E); the + root is the increasing branch.
  const double disc = perim_coeff * perim_coeff - 4.0 * area_coeff * (const_term - n);
  if (disc < 0.0) throw Error("non-monotone-counter", "count not reachable on increasing branch");
  const double u = (perim_coeff + std::sqrt(disc)) / (2.0 * area_coeff);
  return u * u;
}

WeylCounter WeylCounter::rectangle(double a, double b) {
  WeylCounter w;
  w.area_coeff = a * b / (2.0 * kPi);
  w.perim_coeff = (a + b) * std::numbers::sqrt2 / (2.0 * kPi);
  w.const_term = 0.25;  // four right-angle corners, (pi^2 - t^2)/(24 pi t) each
  return w;
}

WeylCounter WeylCounter::quarter_circle(double radius) {
  WeylCounter w;
  w.area_coeff = radius * radius / 8.0;  // (pi R^2/4) / (2 pi)
  const double perimeter = 2.0 * radius + 0.5 * kPi * radius;
  w.perim_coeff = perimeter * std::numbers::sqrt2 / (4.0 * kPi);
  // Three right-angle corners plus the arc curvature term (1/12pi) * (pi/2).
  w.const_term = 3.0 / 16.0 + 1.0 / 24.0;
  return w;
}

RectangularBilliard::RectangularBilliard(double aspect_ratio) : alpha(aspect_ratio) {
  if (!(alpha > 0.0)) throw Error("invalid-billiard", "aspect ratio must be > 0");
  // a*b = 2 pi fixes unit mean density; alpha = a^2/b^2.
  const double root = std::pow(alpha, 0.25);
  a = std::sqrt(units::billiard_area) * root;
  b = std::sqrt(units::billiard_area) / root;
}

double RectangularBilliard::raw_level(int n1, int n2) const {
  const double x = n1 / a;
  const double y = n2 / b;
  return 0.5 * kPi * kPi * (x * x + y * y);
}

WeylCounter RectangularBilliard::weyl() const { return WeylCounter::rectangle(a, b); }

WeylCounter QuarterCircularBilliard::weyl() const {
  return WeylCounter::quarter_circle(radius);
}

std::vector<double> rb_raw_levels(const RectangularBilliard& billiard, double raw_emax,
                                  std::size_t level_cap) {
  if (!(raw_emax > 0.0)) throw Error("invalid-argument", "raw_emax must be > 0");
  std::vector<double> levels;
  const double a = billiard.a;
  const double b = billiard.b;
  const double budget = 2.0 * raw_emax / (kPi * kPi);  // n1^2/a^2 + n2^2/b^2 <= budget
  for (int n1 = 1;; ++n1) {
    const double rem = budget - static_cast<double>(n1) * n1 / (a * a);
    if (rem * b * b < 1.0 - 1e-12) {
      if (billiard.raw_level(n1, 1) > raw_emax) break;
    }
    int n2max = static_cast<int>(std::floor(std::sqrt(std::max(0.0, rem * b * b)) + 1e-9));
    // Exactness guards around the floating-point boundary.
    while (n2max >= 1 && billiard.raw_level(n1, n2max) > raw_emax) --n2max;
    while (billiard.raw_level(n1, n2max + 1) <= raw_emax) ++n2max;
    if (n2max < 1) continue;
    if (levels.size() + static_cast<std::size_t>(n2max) > level_cap)
      throw Error("overflow-guard", "rectangular level count exceeds cap");
    for (int n2 = 1; n2 <= n2max; ++n2) levels.push_back(billiard.raw_level(n1, n2));
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

Spectrum unfold(std::vector<double> raw_levels, const WeylCounter& counter, double alpha,
                double emax) {
  Spectrum s;
  s.alpha = alpha;
  s.emax = emax;
  if (raw_levels.empty()) return s;
  if (!std::is_sorted(raw_levels.begin(), raw_levels.end()))
    throw Error("invalid-argument", "raw levels must be sorted ascending");
  if (raw_levels.front() <= counter.monotone_from())
    throw Error("non-monotone-counter", "Weyl mean not increasing over the data range");
  s.levels.reserve(raw_levels.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (double e : raw_levels) {
    double u = counter.mean_count(e);
    if (u <= prev) u = prev + kTieEpsilon;  // split exact degeneracies
    s.levels.push_back(u);
    prev = u;
  }
  return s;
}

Spectrum rb_levels(const RectangularBilliard& billiard, double emax, std::size_t level_cap) {
  if (!(emax > 0.0)) throw Error("invalid-argument", "emax must be > 0");
  const WeylCounter w = billiard.weyl();
  // Raw cutoff chosen so every level unfolding below emax is enumerated.
  const double raw_emax = w.invert(emax + 1.0) + 1.0;
  return unfold(rb_raw_levels(billiard, raw_emax, level_cap), w, billiard.alpha, emax);
}

Spectrum qcb_levels(const QuarterCircularBilliard& billiard, double emax) {
  if (!(emax > 0.0)) throw Error("invalid-argument", "emax must be > 0");
  const WeylCounter w = billiard.weyl();
  const double raw_emax = w.invert(emax + 1.0) + 1.0;
  const double jmax = billiard.radius * std::sqrt(2.0 * raw_emax);
  std::vector<double> raw;
  for (unsigned m = 2; static_cast<double>(m) < jmax; m += 2) {
    for (double z : bessel::zeros_below(m, jmax)) {
      const double k = z / billiard.radius;
      raw.push_back(0.5 * k * k);
    }
  }
  std::sort(raw.begin(), raw.end());
  return unfold(std::move(raw), w, /*alpha=*/0.0, emax);
}

}  // namespace specstat::spectra
