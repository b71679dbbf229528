#pragma once

#include <cstddef>
#include <vector>

#include "specstat/core.hpp"

namespace specstat::spectra {

/// Smooth Weyl counting function  <N(E)> = area_coeff*E - perim_coeff*sqrt(E)
/// + const_term  for a Dirichlet billiard, monotone on the working range.
struct WeylCounter {
  double area_coeff = 1.0;
  double perim_coeff = 0.0;
  double const_term = 0.0;

  double mean_count(double e) const;
  double derivative(double e) const;
  /// Smallest E on the monotone branch with mean_count(E) = n.
  double invert(double n) const;
  /// E above which the counter is strictly increasing.
  double monotone_from() const;

  static WeylCounter rectangle(double a, double b);
  static WeylCounter quarter_circle(double radius);
};

struct RectangularBilliard {
  explicit RectangularBilliard(double aspect_ratio);

  double alpha;  // a^2 / b^2
  double a, b;   // sides, a*b = 2 pi

  double raw_level(int n1, int n2) const;  // (pi^2/2)(n1^2/a^2 + n2^2/b^2)
  WeylCounter weyl() const;
};

struct QuarterCircularBilliard {
  // Area pi R^2 / 4 = 2 pi  =>  R = 2 sqrt(2).
  double radius = 2.8284271247461900976;

  WeylCounter weyl() const;
};

/// Raw Dirichlet eigenvalues of the rectangle up to raw_emax, ascending.
std::vector<double> rb_raw_levels(const RectangularBilliard& billiard, double raw_emax,
                                  std::size_t level_cap);

/// Unfolds sorted raw levels through the counter; exact ties are split by a
/// 1e-9 epsilon so the output is strictly increasing with count preserved.
Spectrum unfold(std::vector<double> raw_levels, const WeylCounter& counter, double alpha,
                double emax);

/// Complete unfolded rectangle spectrum up to emax (units of the mean spacing).
Spectrum rb_levels(const RectangularBilliard& billiard, double emax,
                   std::size_t level_cap = 50'000'000);

/// Complete unfolded quarter-circle spectrum up to emax.  Dirichlet conditions
/// on both straight edges select sin(m theta) with even m >= 2; radial parts
/// are Bessel zeros j_{m,k}.
Spectrum qcb_levels(const QuarterCircularBilliard& billiard, double emax);

}  // namespace specstat::spectra
