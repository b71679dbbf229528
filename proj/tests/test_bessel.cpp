#include <cmath>

#include "doctest.h"
#include "specstat/bessel.hpp"
#include "specstat/core.hpp"

using namespace specstat;

TEST_CASE("J_n reference values") {
  // Abramowitz & Stegun tabulated values.
  CHECK(bessel::j(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-12));
  CHECK(bessel::j(1, 1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-12));
  CHECK(bessel::j(0, 0.5) == doctest::Approx(0.9384698072408130).epsilon(1e-12));
  CHECK(bessel::j(2, 5.0) == doctest::Approx(0.0465651162777522).epsilon(1e-10));
  CHECK(bessel::j(0, 10.0) == doctest::Approx(-0.2459357644513483).epsilon(1e-10));
  CHECK(bessel::j(5, 20.0) == doctest::Approx(0.1511697680098660).epsilon(1e-10));
}

TEST_CASE("series and recurrence regimes agree near the crossover") {
  for (double x : {7.5, 7.9}) {
    for (unsigned n : {0u, 1u, 3u, 8u}) {
      // x slightly above 8 forces Miller; slightly below uses the series.
      const double lo = bessel::j(n, x);
      const double hi = bessel::j(n, x + 0.2);
      CHECK(std::fabs(hi - lo) < 0.2);  // continuity sanity
    }
  }
  // Normalization identity J_0 + 2 sum_k J_{2k} = 1 evaluated point by point.
  const double x = 30.0;
  double sum = bessel::j(0, x);
  for (unsigned k = 1; k <= 40; ++k) sum += 2.0 * bessel::j(2 * k, x);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("derivative identity") {
  for (double x : {0.7, 3.0, 12.0}) {
    CHECK(bessel::j_derivative(0, x) == doctest::Approx(-bessel::j(1, x)).epsilon(1e-10));
    // Central finite difference cross-check.
    const double h = 1e-6;
    const double fd = (bessel::j(3, x + h) - bessel::j(3, x - h)) / (2.0 * h);
    CHECK(bessel::j_derivative(3, x) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("zeros of low orders") {
  CHECK(bessel::zero(0, 1) == doctest::Approx(2.404825557695773).epsilon(1e-11));
  CHECK(bessel::zero(0, 2) == doctest::Approx(5.520078110286311).epsilon(1e-11));
  CHECK(bessel::zero(1, 1) == doctest::Approx(3.831705970207512).epsilon(1e-11));
  CHECK(bessel::zero(2, 1) == doctest::Approx(5.135622301840683).epsilon(1e-11));
  CHECK(bessel::zero(5, 3) == doctest::Approx(15.70017407971167).epsilon(1e-10));
}

TEST_CASE("zeros_below enumerates without gaps") {
  const auto zs = bessel::zeros_below(0, 20.0);
  REQUIRE(zs.size() == 6);
  CHECK(zs[5] == doctest::Approx(18.07106396791092).epsilon(1e-10));
  for (std::size_t i = 1; i < zs.size(); ++i) {
    CHECK(zs[i] - zs[i - 1] > 3.0);  // J_0 zero spacing stays close to pi
    CHECK(zs[i] - zs[i - 1] < 3.3);
  }
  CHECK(bessel::zeros_below(40, 30.0).empty());  // j_{40,1} > 40 > xmax
}

TEST_CASE("McMahon estimate approaches true zeros") {
  CHECK(std::fabs(bessel::mcmahon_zero_estimate(0, 10) - bessel::zero(0, 10)) < 1e-4);
  CHECK(std::fabs(bessel::mcmahon_zero_estimate(2, 8) - bessel::zero(2, 8)) < 1e-2);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel::j(0, 0.0), Error);
  CHECK_THROWS_AS(bessel::j(0, -1.0), Error);
  CHECK_THROWS_AS(bessel::j(bessel::kMaxOrder + 1, 1.0), Error);
  CHECK_THROWS_AS(bessel::zero(0, 0), Error);
}

TEST_CASE("high-order evaluation stays finite and normalized") {
  // Orders comparable to the quarter-circle workload.
  const double v = bessel::j(400, 410.0);
  CHECK(std::isfinite(v));
  CHECK(std::fabs(v) < 1.0);
  const auto zs = bessel::zeros_below(100, 130.0);
  CHECK(!zs.empty());
  for (double z : zs) CHECK(std::fabs(bessel::j(100, z)) < 1e-9);
}
