#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "specstat/spectra.hpp"
#include "specstat/stats.hpp"

using namespace specstat;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("square billiard ground state") {
  const spectra::RectangularBilliard rb(1.0);
  CHECK(rb.a == doctest::Approx(rb.b).epsilon(1e-15));
  CHECK(rb.a * rb.b == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  // E(1,1) = (pi^2/2)(1/a^2 + 1/b^2) with a = b = sqrt(2 pi)  ->  pi/2.
  CHECK(rb.raw_level(1, 1) == doctest::Approx(0.5 * kPi).epsilon(1e-14));
}

TEST_CASE("aspect ratio definition alpha = a^2/b^2") {
  const spectra::RectangularBilliard rb(2.5);
  CHECK(rb.a * rb.a / (rb.b * rb.b) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(rb.a * rb.b == doctest::Approx(2.0 * kPi).epsilon(1e-13));
}

TEST_CASE("raw level enumeration matches a naive double loop") {
  for (double alpha : {0.7, 1.0, 1.37}) {
    const spectra::RectangularBilliard rb(alpha);
    const double raw_emax = 500.0;
    std::vector<double> naive;
    for (int n1 = 1; rb.raw_level(n1, 1) <= raw_emax; ++n1)
      for (int n2 = 1; rb.raw_level(n1, n2) <= raw_emax; ++n2)
        naive.push_back(rb.raw_level(n1, n2));
    std::sort(naive.begin(), naive.end());
    const auto fast = spectra::rb_raw_levels(rb, raw_emax, 1'000'000);
    REQUIRE(fast.size() == naive.size());
    for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == naive[i]);
  }
}

TEST_CASE("enumeration cap is an overflow guard") {
  const spectra::RectangularBilliard rb(1.0);
  CHECK_THROWS_WITH_AS(spectra::rb_raw_levels(rb, 500.0, 10),
                       doctest::Contains("overflow-guard"), Error);
}

TEST_CASE("Weyl counter inversion and monotonicity") {
  const auto w = spectra::WeylCounter::rectangle(std::sqrt(2.0 * kPi), std::sqrt(2.0 * kPi));
  for (double e : {10.0, 100.0, 5000.0}) {
    CHECK(w.invert(w.mean_count(e)) == doctest::Approx(e).epsilon(1e-12));
    CHECK(w.derivative(e) > 0.0);
  }
  CHECK(w.mean_count(1000.0) > w.mean_count(999.0));
}

TEST_CASE("unfolding yields unit mean density") {
  const spectra::RectangularBilliard rb(1.0);
  const Spectrum s = spectra::rb_levels(rb, 2000.0);
  REQUIRE(!s.levels.empty());
  CHECK(std::is_sorted(s.levels.begin(), s.levels.end()));
  // Strictly increasing even though the square spectrum is highly degenerate.
  for (std::size_t i = 1; i < s.levels.size(); ++i) CHECK(s.levels[i] > s.levels[i - 1]);
  // Fluctuations of N(eps) - eps stay modest for an unfolded spectrum.
  double worst = 0.0;
  for (double eps = 100.0; eps <= 2000.0; eps += 37.0) {
    const double n = static_cast<double>(stats::staircase(s, eps));
    worst = std::max(worst, std::fabs(n - eps));
  }
  CHECK(worst < 25.0);
}

TEST_CASE("completeness near emax") {
  const spectra::RectangularBilliard rb(1.2);
  const Spectrum s = spectra::rb_levels(rb, 500.0);
  // All levels <= emax must be present: count at emax is within fluctuation
  // range, and no level beyond the raw cutoff got lost below it.
  const double n = static_cast<double>(stats::staircase(s, 500.0));
  CHECK(std::fabs(n - 500.0) < 20.0);
}

TEST_CASE("unfold rejects unsorted input and non-monotone ranges") {
  const auto w = spectra::WeylCounter::rectangle(10.0, 0.6);
  CHECK_THROWS_AS(spectra::unfold({3.0, 2.0}, w, 1.0, 10.0), Error);
  // First raw level below the monotone threshold of a perimeter-heavy counter.
  spectra::WeylCounter heavy{1.0, 10.0, 0.0};
  CHECK_THROWS_WITH_AS(spectra::unfold({1.0, 2.0}, heavy, 1.0, 10.0),
                       doctest::Contains("non-monotone-counter"), Error);
}

TEST_CASE("quarter-circle spectrum") {
  const spectra::QuarterCircularBilliard qcb;
  CHECK(qcb.radius * qcb.radius == doctest::Approx(8.0).epsilon(1e-14));
  const Spectrum s = spectra::qcb_levels(qcb, 300.0);
  REQUIRE(!s.levels.empty());
  for (std::size_t i = 1; i < s.levels.size(); ++i) CHECK(s.levels[i] > s.levels[i - 1]);
  // Unit mean density after unfolding.
  const double n = static_cast<double>(stats::staircase(s, 300.0));
  CHECK(std::fabs(n - 300.0) < 15.0);
  // Lowest state: j_{2,1} = 5.1356...; E = (j/R)^2/2, unfolded near 1.
  CHECK(s.levels.front() > 0.0);
  CHECK(s.levels.front() < 5.0);
}

TEST_CASE("quarter-circle Weyl coefficients") {
  const spectra::QuarterCircularBilliard qcb;
  const auto w = qcb.weyl();
  CHECK(w.area_coeff == doctest::Approx(1.0).epsilon(1e-14));  // area = 2 pi by construction
  const double perimeter = 2.0 * qcb.radius + 0.5 * kPi * qcb.radius;
  CHECK(w.perim_coeff == doctest::Approx(perimeter * std::numbers::sqrt2 / (4.0 * kPi)));
}
