#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "specstat/core.hpp"

namespace specstat::stats {

/// Number of levels <= epsilon (right-continuous staircase).
std::size_t staircase(const Spectrum& spectrum, double epsilon);

/// An ensemble is a pure per-index spectrum source; spectra for different
/// indices can be materialized concurrently.
struct Ensemble {
  std::size_t count = 0;
  std::function<Spectrum(std::size_t)> spectrum_at;
  SeriesMeta meta;  // provenance copied into every StatSeries
};

enum class Variant { VsMean, VsEpsilon };

/// Per-sample measurement rows in deterministic sample order.  All column
/// statistics reduce through a fixed pairwise tree, so splitting the ensemble
/// into partitions and merging them in order is bit-identical to one pass.
class EnsembleAccumulator {
public:
  EnsembleAccumulator(std::size_t first_index, std::size_t n_cols);

  void add_row(std::size_t sample_index, std::vector<double> row);
  void merge(EnsembleAccumulator&& tail);  // tail must start where this ends

  std::size_t rows() const { return data_.size(); }
  std::size_t cols() const { return n_cols_; }
  std::size_t first_index() const { return first_; }

  double mean(std::size_t col) const;
  double variance(std::size_t col) const;  // population, <x^2> - <x>^2 form
  double covariance(std::size_t c1, std::size_t c2) const;
  /// Mean of (x - ref1)(y - ref2) against fixed references.
  double mean_product_about(std::size_t c1, double ref1, std::size_t c2, double ref2) const;

  std::span<const std::vector<double>> raw() const { return data_; }

private:
  std::size_t first_;
  std::size_t n_cols_;
  std::vector<std::vector<double>> data_;
};

/// Evaluates `measure` on every ensemble member in parallel and gathers the
/// rows in sample order.
EnsembleAccumulator collect(const Ensemble& ensemble,
                            const std::function<std::vector<double>(const Spectrum&)>& measure,
                            std::size_t n_cols);

StatSeries global_variance_num(const Ensemble& ensemble, std::span<const double> grid,
                               Variant variant);
StatSeries staircase_correlation_num(const Ensemble& ensemble, double epsilon,
                                     std::span<const double> omega_grid, Variant variant);
StatSeries interval_variance_num(const Ensemble& ensemble, double epsilon,
                                 std::span<const double> omega_grid);
StatSeries mean_staircase_diagnostic(const Ensemble& ensemble, std::span<const double> grid);

/// Spectral rigidity over the window [epsilon - L/2, epsilon + L/2]: the
/// least-squares residual of the staircase against a straight line, with all
/// per-step integrals in closed form (no sampling grid).
double delta3(const Spectrum& spectrum, double epsilon, double window);
double delta3(const Ensemble& ensemble, double epsilon, double window);

/// Rigidity curve over a geometric window grid plus plateau extraction:
/// the plateau is the top decade of L once successive values differ < 2%;
/// its value is the median over that decade.
struct SaturationResult {
  double value = 0.0;
  std::vector<double> l_grid;
  std::vector<double> curve;
};
SaturationResult delta3_saturation_num(const Ensemble& ensemble, double epsilon,
                                       std::span<const double> l_grid);

/// Saturation extraction at several epsilon anchors in one ensemble pass;
/// l_grid_for(eps) supplies the per-anchor window grid.
std::vector<SaturationResult> delta3_saturation_profile(
    const Ensemble& ensemble, std::span<const double> eps_anchors,
    const std::function<std::vector<double>(double)>& l_grid_for);

std::vector<double> geometric_grid(double lo, double hi, std::size_t points);

}  // namespace specstat::stats
