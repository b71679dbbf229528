#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace specstat {

/// Error with a stable machine-readable code ("invalid-distribution",
/// "out-of-range", ...) in front of the human-readable message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

// Unit conventions shared by the whole project.  Everything downstream is
// dimensionless: energies are multiples of the mean level spacing.
namespace units {
inline constexpr double hbar = 1.0;
inline constexpr double mass = 1.0;
inline constexpr double mean_spacing = 1.0;
// Billiard area such that the leading Weyl term gives unit mean density
// with m = hbar = 1:  N(E) ~ (A / 4 pi) * 2E = E  requires  A = 2 pi.
inline constexpr double billiard_area = 6.283185307179586476925286766559;
}  // namespace units

/// Gaussian family of aspect ratios alpha = a^2/b^2, truncated to alpha > 0
/// by per-index resampling.  Sampling is a pure function of (dist, index),
/// so parallel generation is order-independent.
struct AspectRatioDistribution {
  double alpha0 = 1.0;
  double sigma = 0.05;
  std::size_t count = 1;
  std::uint64_t seed = 0;

  void validate() const;  // throws Error("invalid-distribution")
};

double sample_aspect_ratio(const AspectRatioDistribution& dist, std::size_t index);
std::vector<double> sample_aspect_ratios(const AspectRatioDistribution& dist);

/// One billiard's unfolded spectrum.  `levels` is strictly increasing, in
/// units of the mean spacing; every level <= emax is guaranteed present.
struct Spectrum {
  double alpha = 0.0;
  std::vector<double> levels;
  double emax = 0.0;
};

struct SeriesMeta {
  std::string estimator;
  std::size_t n_samples = 1;
  std::uint64_t seed = 0;
  double alpha0 = 0.0;
  double sigma = 0.0;
  std::string config_hash;
};

/// A sampled curve: strictly increasing grid, finite values, optional
/// standard errors, plus provenance.
struct StatSeries {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> stderrs;  // empty or same length as values
  SeriesMeta meta;

  void validate() const;
};

/// Deterministic pairwise summation.  Fixed reduction tree independent of
/// partitioning, used for every ensemble reduction so that split/merge
/// reproduces the single-pass result bit-exactly.
double pairwise_sum(std::span<const double> xs);

/// Runs fn(i) for i in [0, n) on a static partition of worker threads.
/// Results must be written to per-index slots; with that discipline the
/// outcome does not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// FNV-1a over a string; used for config/cache content hashes.
std::uint64_t fnv1a(std::string_view s);

}  // namespace specstat
