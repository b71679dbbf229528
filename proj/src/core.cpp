#include "specstat/core.hpp"

#include <cmath>
#include <numbers>
#include <thread>

namespace specstat {

namespace {

// splitmix64: tiny counter-friendly generator with good equidistribution.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline double to_open_unit(std::uint64_t u) {
  // (0, 1): never returns 0, safe for log().
  return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

void AspectRatioDistribution::validate() const {
  if (!(sigma > 0.0))
    throw Error("invalid-distribution", "sigma must be > 0");
  if (sigma > 0.2)
    throw Error("invalid-distribution", "sigma must be <= 0.2 (narrow-family contract)");
  if (!(alpha0 > 0.0))
    throw Error("invalid-distribution", "alpha0 must be > 0");
  if (count < 1)
    throw Error("invalid-distribution", "count must be >= 1");
}

double sample_aspect_ratio(const AspectRatioDistribution& dist, std::size_t index) {
  dist.validate();
  // Per-index stream: seed mixed with the index so draws are pure in
  // (dist, index) and independent of evaluation order.
  std::uint64_t state = dist.seed ^ (0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(index) + 1));
  splitmix64(state);
  for (int attempt = 0; attempt < 1024; ++attempt) {
    const double u1 = to_open_unit(splitmix64(state));
    const double u2 = to_open_unit(splitmix64(state));
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    const double alpha = dist.alpha0 + dist.sigma * z;
    if (alpha > 0.0) return alpha;
  }
  // Unreachable for any valid (alpha0, sigma <= 0.2) family.
  throw Error("invalid-distribution", "resampling failed to produce a positive draw");
}

std::vector<double> sample_aspect_ratios(const AspectRatioDistribution& dist) {
  dist.validate();
  std::vector<double> out(dist.count);
  for (std::size_t i = 0; i < dist.count; ++i) out[i] = sample_aspect_ratio(dist, i);
  return out;
}

void StatSeries::validate() const {
  if (grid.size() != values.size())
    throw Error("invalid-series", "grid/value length mismatch");
  if (!stderrs.empty() && stderrs.size() != values.size())
    throw Error("invalid-series", "stderr length mismatch");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw Error("invalid-series", "grid must be strictly increasing");
  for (double v : values)
    if (!std::isfinite(v)) throw Error("invalid-series", "non-finite value");
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const std::size_t nthreads = std::min<std::size_t>(hw, n);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t lo = n * t / nthreads;
    const std::size_t hi = n * (t + 1) / nthreads;
    workers.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace specstat
