#include <atomic>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "specstat/core.hpp"

using namespace specstat;

TEST_CASE("pairwise_sum matches a high-precision reference") {
  std::vector<double> xs(1003);
  for (std::size_t i = 0; i < xs.size(); ++i)
    xs[i] = std::sin(0.1 * static_cast<double>(i)) * 1e3;
  long double ref = 0.0L;
  for (double x : xs) ref += x;
  CHECK(pairwise_sum(xs) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
}

TEST_CASE("pairwise_sum of empty and tiny spans") {
  CHECK(pairwise_sum({}) == 0.0);
  std::vector<double> one{3.5};
  CHECK(pairwise_sum(one) == 3.5);
}

TEST_CASE("aspect ratio sampling is a pure function of (dist, index)") {
  AspectRatioDistribution dist{1.0, 0.05, 100, 42};
  for (std::size_t i : {0u, 1u, 57u}) {
    CHECK(sample_aspect_ratio(dist, i) == sample_aspect_ratio(dist, i));
  }
  // Distinct indices give distinct draws.
  CHECK(sample_aspect_ratio(dist, 0) != sample_aspect_ratio(dist, 1));
}

TEST_CASE("aspect ratio samples are positive with the right moments") {
  AspectRatioDistribution dist{1.0, 0.05, 20000, 7};
  const auto xs = sample_aspect_ratios(dist);
  double mean = 0.0;
  for (double x : xs) {
    CHECK(x > 0.0);
    mean += x;
  }
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  // 5-sigma bands for the sample mean and a loose band for the variance.
  CHECK(std::fabs(mean - dist.alpha0) < 5.0 * dist.sigma / std::sqrt(20000.0));
  CHECK(std::sqrt(var) == doctest::Approx(dist.sigma).epsilon(0.05));
}

TEST_CASE("distribution validation rejects bad parameters") {
  AspectRatioDistribution d{1.0, 0.5, 10, 0};
  CHECK_THROWS_WITH_AS(d.validate(), doctest::Contains("invalid-distribution"), Error);
  d = {1.0, -0.1, 10, 0};
  CHECK_THROWS_AS(d.validate(), Error);
  d = {-1.0, 0.05, 10, 0};
  CHECK_THROWS_AS(d.validate(), Error);
  d = {1.0, 0.05, 0, 0};
  CHECK_THROWS_AS(d.validate(), Error);
}

TEST_CASE("StatSeries validation") {
  StatSeries s;
  s.grid = {1.0, 2.0, 3.0};
  s.values = {0.1, 0.2, 0.3};
  CHECK_NOTHROW(s.validate());
  s.grid = {1.0, 2.0, 2.0};
  CHECK_THROWS_AS(s.validate(), Error);
  s.grid = {1.0, 2.0, 3.0};
  s.values[1] = std::nan("");
  CHECK_THROWS_AS(s.validate(), Error);
  s.values[1] = 0.2;
  s.stderrs = {0.0};
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("parallel_for touches every index exactly once") {
  const std::size_t n = 1000;
  std::vector<std::atomic<int>> hits(n);
  parallel_for(n, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) CHECK(h.load() == 1);
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a("") == 14695981039346656037ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
}
