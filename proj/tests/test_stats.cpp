#include <cmath>
#include <vector>

#include "doctest.h"
#include "specstat/stats.hpp"

using namespace specstat;

namespace {

Spectrum ruler(std::size_t n) {
  Spectrum s;
  s.alpha = 1.0;
  s.emax = static_cast<double>(n);
  s.levels.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.levels[i] = static_cast<double>(i + 1);
  return s;
}

// Deterministic unit-density spectrum with exponential spacings.
Spectrum poisson_spectrum(double emax, std::uint64_t seed) {
  Spectrum s;
  s.alpha = 1.0;
  s.emax = emax;
  std::uint64_t state = seed;
  auto next = [&state]() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
  };
  double x = 0.0;
  for (;;) {
    x += -std::log(next());
    if (x > emax) break;
    s.levels.push_back(x);
  }
  return s;
}

stats::Ensemble poisson_ensemble(std::size_t count, double emax, std::uint64_t seed) {
  stats::Ensemble e;
  e.count = count;
  e.meta.n_samples = count;
  e.spectrum_at = [emax, seed](std::size_t i) {
    return poisson_spectrum(emax, seed ^ (0x9e3779b97f4a7c15ull * (i + 1)));
  };
  return e;
}

}  // namespace

TEST_CASE("staircase counting conventions") {
  Spectrum s = ruler(10);
  CHECK(stats::staircase(s, 0.5) == 0);           // below the first level
  CHECK(stats::staircase(s, 1.0) == 1);           // right-continuous at a level
  CHECK(stats::staircase(s, 3.999999) == 3);
  CHECK(stats::staircase(s, 10.0) == 10);
  // Additivity over disjoint intervals.
  CHECK(stats::staircase(s, 7.3) - stats::staircase(s, 2.1) == 5);
  CHECK_THROWS_WITH_AS(stats::staircase(s, 10.5), doctest::Contains("out-of-range"), Error);
}

TEST_CASE("accumulator enforces sample order and merges deterministically") {
  auto fill = [](stats::EnsembleAccumulator& acc, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
      const double v = std::sin(static_cast<double>(i));
      acc.add_row(i, {v, v * v});
    }
  };
  stats::EnsembleAccumulator whole(0, 2);
  fill(whole, 0, 100);

  stats::EnsembleAccumulator p1(0, 2), p2(37, 2), p3(81, 2);
  fill(p1, 0, 37);
  fill(p2, 37, 81);
  fill(p3, 81, 100);
  p2.merge(std::move(p3));
  p1.merge(std::move(p2));

  CHECK(p1.rows() == whole.rows());
  CHECK(p1.mean(0) == whole.mean(0));          // bit-exact by the fixed reduction tree
  CHECK(p1.variance(1) == whole.variance(1));
  CHECK(p1.covariance(0, 1) == whole.covariance(0, 1));

  stats::EnsembleAccumulator bad(0, 2);
  bad.add_row(0, {1.0, 2.0});
  CHECK_THROWS_AS(bad.add_row(2, {1.0, 2.0}), Error);
  stats::EnsembleAccumulator gap(5, 2);
  CHECK_THROWS_AS(bad.merge(std::move(gap)), Error);
}

TEST_CASE("variance estimators and their ordering") {
  auto ens = poisson_ensemble(60, 400.0, 11);
  std::vector<double> grid{100.0, 200.0, 300.0};
  const auto vs_mean = stats::global_variance_num(ens, grid, stats::Variant::VsMean);
  const auto vs_eps = stats::global_variance_num(ens, grid, stats::Variant::VsEpsilon);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(vs_mean.values[i] >= 0.0);
    // vs-epsilon = Var + bias^2 >= vs-mean.
    CHECK(vs_eps.values[i] >= vs_mean.values[i] - 1e-12);
  }
  CHECK(vs_mean.meta.estimator == "global-variance-vs-mean");
}

TEST_CASE("identical spectra have zero variance about the mean") {
  stats::Ensemble e;
  e.count = 5;
  e.meta.n_samples = 5;
  e.spectrum_at = [](std::size_t) { return poisson_spectrum(200.0, 5); };
  const auto v = stats::global_variance_num(e, std::vector<double>{50.0, 150.0},
                                            stats::Variant::VsMean);
  CHECK(v.values[0] == 0.0);
  CHECK(v.values[1] == 0.0);
}

TEST_CASE("estimator identities on shared data") {
  auto ens = poisson_ensemble(40, 500.0, 23);
  const double eps = 200.0;
  // Zero-window correlation equals the global variance.
  const auto k0 = stats::staircase_correlation_num(ens, eps, std::vector<double>{0.0},
                                                   stats::Variant::VsMean);
  const auto sg = stats::global_variance_num(ens, std::vector<double>{eps},
                                             stats::Variant::VsMean);
  CHECK(std::fabs(k0.values[0] - sg.values[0]) <= 1e-10);

  // Var(N2 - N1) = Var N1 + Var N2 - 2 Cov(N1, N2).
  for (double omega : {4.0, 16.0}) {
    const auto iv = stats::interval_variance_num(ens, eps, std::vector<double>{omega});
    const auto kn = stats::staircase_correlation_num(ens, eps, std::vector<double>{omega},
                                                     stats::Variant::VsMean);
    const auto gv = stats::global_variance_num(
        ens, std::vector<double>{eps - 0.5 * omega, eps + 0.5 * omega},
        stats::Variant::VsMean);
    CHECK(std::fabs(iv.values[0] - (gv.values[0] + gv.values[1] - 2.0 * kn.values[0])) <= 1e-10);
  }
}

TEST_CASE("estimators demand enough samples") {
  auto ens = poisson_ensemble(1, 100.0, 3);
  CHECK_THROWS_WITH_AS(
      stats::global_variance_num(ens, std::vector<double>{50.0}, stats::Variant::VsMean),
      doctest::Contains("insufficient-ensemble"), Error);
}

TEST_CASE("rigidity: picket fence saturates at 1/12") {
  const Spectrum s = ruler(12000);
  CHECK(stats::delta3(s, 6000.0, 4000.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-6));
  stats::Ensemble one;
  one.count = 1;
  one.meta.n_samples = 1;
  one.spectrum_at = [&s](std::size_t) { return s; };
  const auto sat = stats::delta3_saturation_num(one, 6000.0, stats::geometric_grid(10, 5000, 16));
  CHECK(sat.value == doctest::Approx(1.0 / 12.0).epsilon(1e-5));
}

TEST_CASE("rigidity translation invariance") {
  Spectrum s = poisson_spectrum(300.0, 77);
  const double base = stats::delta3(s, 150.0, 60.0);
  Spectrum shifted = s;
  for (double& v : shifted.levels) v += 10.0;
  shifted.emax += 10.0;
  CHECK(stats::delta3(shifted, 160.0, 60.0) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("rigidity window bounds are enforced") {
  Spectrum s = ruler(100);
  CHECK_THROWS_WITH_AS(stats::delta3(s, 90.0, 30.0), doctest::Contains("out-of-range"), Error);
  CHECK_THROWS_WITH_AS(stats::delta3(s, 5.0, 30.0), doctest::Contains("out-of-range"), Error);
  CHECK_THROWS_AS(stats::delta3(s, 50.0, 0.0), Error);
}

TEST_CASE("a single Poisson spectrum has no rigidity plateau") {
  stats::Ensemble one;
  one.count = 1;
  one.meta.n_samples = 1;
  one.spectrum_at = [](std::size_t) { return poisson_spectrum(1000.0, 13); };
  CHECK_THROWS_WITH_AS(
      stats::delta3_saturation_num(one, 500.0, stats::geometric_grid(5, 900, 16)),
      doctest::Contains("no-plateau"), Error);
}

TEST_CASE("saturation profile matches per-anchor extraction") {
  // The picket fence has a genuine plateau at every anchor.
  stats::Ensemble one;
  one.count = 1;
  one.meta.n_samples = 1;
  one.spectrum_at = [](std::size_t) { return ruler(12000); };
  const std::vector<double> anchors{4000.0, 6000.0};
  auto grids = [](double) { return stats::geometric_grid(10, 5000, 16); };
  const auto profile = stats::delta3_saturation_profile(one, anchors, grids);
  REQUIRE(profile.size() == 2);
  for (const auto& p : profile) CHECK(p.value == doctest::Approx(1.0 / 12.0).epsilon(1e-5));
  const auto direct = stats::delta3_saturation_num(one, 6000.0, grids(0));
  CHECK(profile[1].value == direct.value);
}

TEST_CASE("mean staircase diagnostic on the picket fence") {
  stats::Ensemble one;
  one.count = 1;
  one.meta.n_samples = 1;
  one.spectrum_at = [](std::size_t) { return ruler(100); };
  std::vector<double> grid{10.5, 50.25, 99.75};
  const auto d = stats::mean_staircase_diagnostic(one, grid);
  for (double v : d.values) CHECK(std::fabs(v) <= 1.0);
}

TEST_CASE("geometric grid endpoints and monotonicity") {
  const auto g = stats::geometric_grid(5.0, 2000.0, 24);
  REQUIRE(g.size() == 24);
  CHECK(g.front() == 5.0);
  CHECK(g.back() == 2000.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK_THROWS_AS(stats::geometric_grid(-1.0, 10.0, 4), Error);
  CHECK_THROWS_AS(stats::geometric_grid(10.0, 5.0, 4), Error);
}
