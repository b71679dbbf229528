#include "specstat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specstat::stats {

namespace {

void require_samples(const Ensemble& ensemble, std::size_t minimum) {
  if (ensemble.count < minimum)
    throw Error("insufficient-ensemble", "estimator needs at least " + std::to_string(minimum) +
                                             " ensemble members");
}

std::vector<double> column(const EnsembleAccumulator& acc, std::size_t col) {
  std::vector<double> xs(acc.rows());
  auto rows = acc.raw();
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = rows[i][col];
  return xs;
}

double mean_of(std::span<const double> xs) {
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

}  // namespace

std::size_t staircase(const Spectrum& spectrum, double epsilon) {
  if (epsilon > spectrum.emax)
    throw Error("out-of-range", "epsilon exceeds the spectrum completeness bound");
  // Right-continuous: a level exactly at epsilon is counted.
  return static_cast<std::size_t>(
      std::upper_bound(spectrum.levels.begin(), spectrum.levels.end(), epsilon) -
      spectrum.levels.begin());
}

EnsembleAccumulator::EnsembleAccumulator(std::size_t first_index, std::size_t n_cols)
    : first_(first_index), n_cols_(n_cols) {}

void EnsembleAccumulator::add_row(std::size_t sample_index, std::vector<double> row) {
  if (sample_index != first_ + data_.size())
    throw Error("invalid-argument", "rows must arrive in sample order");
  if (row.size() != n_cols_) throw Error("invalid-argument", "row width mismatch");
  data_.push_back(std::move(row));
}

void EnsembleAccumulator::merge(EnsembleAccumulator&& tail) {
  if (tail.n_cols_ != n_cols_) throw Error("invalid-argument", "column mismatch in merge");
  if (tail.first_ != first_ + data_.size())
    throw Error("invalid-argument", "merge partitions must be contiguous in sample order");
  for (auto& row : tail.data_) data_.push_back(std::move(row));
  tail.data_.clear();
}

double EnsembleAccumulator::mean(std::size_t col) const {
  if (data_.empty()) throw Error("insufficient-ensemble", "no rows");
  return mean_of(column(*this, col));
}

double EnsembleAccumulator::covariance(std::size_t c1, std::size_t c2) const {
  // Centered two-pass form; keeps the estimator identities exact to ~1e-14
  // even when the raw counts are O(1e4).
  const std::vector<double> xs = column(*this, c1);
  const std::vector<double> ys = column(*this, c2);
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  std::vector<double> prod(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) prod[i] = (xs[i] - mx) * (ys[i] - my);
  return mean_of(prod);
}

double EnsembleAccumulator::variance(std::size_t col) const { return covariance(col, col); }

double EnsembleAccumulator::mean_product_about(std::size_t c1, double ref1, std::size_t c2,
                                               double ref2) const {
  const std::vector<double> xs = column(*this, c1);
  const std::vector<double> ys = column(*this, c2);
  std::vector<double> prod(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) prod[i] = (xs[i] - ref1) * (ys[i] - ref2);
  return mean_of(prod);
}

EnsembleAccumulator collect(const Ensemble& ensemble,
                            const std::function<std::vector<double>(const Spectrum&)>& measure,
                            std::size_t n_cols) {
  std::vector<std::vector<double>> rows(ensemble.count);
  parallel_for(ensemble.count,
               [&](std::size_t i) { rows[i] = measure(ensemble.spectrum_at(i)); });
  EnsembleAccumulator acc(0, n_cols);
  for (std::size_t i = 0; i < rows.size(); ++i) acc.add_row(i, std::move(rows[i]));
  return acc;
}

namespace {

// Standard error of a sample-mean column.
double se_of_mean(std::span<const double> xs, double m) {
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - m) * (xs[i] - m);
  return std::sqrt(std::max(0.0, mean_of(sq)) / static_cast<double>(xs.size()));
}

}  // namespace

StatSeries global_variance_num(const Ensemble& ensemble, std::span<const double> grid,
                               Variant variant) {
  require_samples(ensemble, 2);
  std::vector<double> g(grid.begin(), grid.end());
  auto acc = collect(
      ensemble,
      [&g](const Spectrum& s) {
        std::vector<double> row(g.size());
        for (std::size_t k = 0; k < g.size(); ++k)
          row[k] = static_cast<double>(staircase(s, g[k]));
        return row;
      },
      g.size());

  StatSeries out;
  out.grid = g;
  out.values.resize(g.size());
  out.stderrs.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const std::vector<double> xs = column(acc, k);
    if (variant == Variant::VsMean) {
      const double m = mean_of(xs);
      std::vector<double> dev(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - m;
        dev[i] = d * d;
      }
      out.values[k] = mean_of(dev);
      // Moment-based standard error of the variance estimate.
      std::vector<double> dev2(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i)
        dev2[i] = (dev[i] - out.values[k]) * (dev[i] - out.values[k]);
      out.stderrs[k] = std::sqrt(std::max(0.0, mean_of(dev2)) / static_cast<double>(xs.size()));
    } else {
      std::vector<double> dev(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - g[k];
        dev[i] = d * d;
      }
      out.values[k] = mean_of(dev);
      out.stderrs[k] = se_of_mean(dev, out.values[k]);
    }
  }
  out.meta = ensemble.meta;
  out.meta.estimator =
      variant == Variant::VsMean ? "global-variance-vs-mean" : "global-variance-vs-epsilon";
  out.meta.n_samples = ensemble.count;
  out.validate();
  return out;
}

StatSeries staircase_correlation_num(const Ensemble& ensemble, double epsilon,
                                     std::span<const double> omega_grid, Variant variant) {
  require_samples(ensemble, 2);
  std::vector<double> og(omega_grid.begin(), omega_grid.end());
  // Row layout: N(eps - w/2) then N(eps + w/2) for each omega.
  auto acc = collect(
      ensemble,
      [&og, epsilon](const Spectrum& s) {
        std::vector<double> row(2 * og.size());
        for (std::size_t k = 0; k < og.size(); ++k) {
          row[2 * k] = static_cast<double>(staircase(s, epsilon - 0.5 * og[k]));
          row[2 * k + 1] = static_cast<double>(staircase(s, epsilon + 0.5 * og[k]));
        }
        return row;
      },
      2 * og.size());

  StatSeries out;
  out.grid = og;
  out.values.resize(og.size());
  out.stderrs.resize(og.size());
  for (std::size_t k = 0; k < og.size(); ++k) {
    if (variant == Variant::VsMean) {
      out.values[k] = acc.covariance(2 * k, 2 * k + 1);
      const double m1 = acc.mean(2 * k), m2 = acc.mean(2 * k + 1);
      const std::vector<double> xs = column(acc, 2 * k), ys = column(acc, 2 * k + 1);
      std::vector<double> prod(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) prod[i] = (xs[i] - m1) * (ys[i] - m2);
      out.stderrs[k] = se_of_mean(prod, out.values[k]);
    } else {
      const double e1 = epsilon - 0.5 * og[k], e2 = epsilon + 0.5 * og[k];
      out.values[k] = acc.mean_product_about(2 * k, e1, 2 * k + 1, e2);
      const std::vector<double> xs = column(acc, 2 * k), ys = column(acc, 2 * k + 1);
      std::vector<double> prod(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) prod[i] = (xs[i] - e1) * (ys[i] - e2);
      out.stderrs[k] = se_of_mean(prod, out.values[k]);
    }
  }
  out.meta = ensemble.meta;
  out.meta.estimator = variant == Variant::VsMean ? "staircase-correlation-vs-mean"
                                                  : "staircase-correlation-vs-epsilon";
  out.meta.n_samples = ensemble.count;
  out.validate();
  return out;
}

StatSeries interval_variance_num(const Ensemble& ensemble, double epsilon,
                                 std::span<const double> omega_grid) {
  require_samples(ensemble, 2);
  std::vector<double> og(omega_grid.begin(), omega_grid.end());
  auto acc = collect(
      ensemble,
      [&og, epsilon](const Spectrum& s) {
        std::vector<double> row(og.size());
        for (std::size_t k = 0; k < og.size(); ++k) {
          row[k] = static_cast<double>(staircase(s, epsilon + 0.5 * og[k])) -
                   static_cast<double>(staircase(s, epsilon - 0.5 * og[k]));
        }
        return row;
      },
      og.size());

  StatSeries out;
  out.grid = og;
  out.values.resize(og.size());
  out.stderrs.resize(og.size());
  for (std::size_t k = 0; k < og.size(); ++k) {
    out.values[k] = acc.variance(k);
    const std::vector<double> xs = column(acc, k);
    const double m = mean_of(xs);
    std::vector<double> dev(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) dev[i] = (xs[i] - m) * (xs[i] - m);
    out.stderrs[k] = se_of_mean(dev, out.values[k]);
  }
  out.meta = ensemble.meta;
  out.meta.estimator = "interval-variance";
  out.meta.n_samples = ensemble.count;
  out.validate();
  return out;
}

StatSeries mean_staircase_diagnostic(const Ensemble& ensemble, std::span<const double> grid) {
  require_samples(ensemble, 1);
  std::vector<double> g(grid.begin(), grid.end());
  auto acc = collect(
      ensemble,
      [&g](const Spectrum& s) {
        std::vector<double> row(g.size());
        for (std::size_t k = 0; k < g.size(); ++k)
          row[k] = static_cast<double>(staircase(s, g[k]));
        return row;
      },
      g.size());
  StatSeries out;
  out.grid = g;
  out.values.resize(g.size());
  out.stderrs.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double m = acc.mean(k);
    out.values[k] = m - g[k];
    out.stderrs[k] = se_of_mean(column(acc, k), m);
  }
  out.meta = ensemble.meta;
  out.meta.estimator = "mean-staircase-diagnostic";
  out.meta.n_samples = ensemble.count;
  out.validate();
  return out;
}

double delta3(const Spectrum& spectrum, double epsilon, double window) {
  if (!(window > 0.0)) throw Error("invalid-argument", "window must be > 0");
  const double x0 = epsilon - 0.5 * window;
  const double x1 = epsilon + 0.5 * window;
  if (x1 > spectrum.emax) throw Error("out-of-range", "window exceeds completeness bound");
  if (x0 < 0.0) throw Error("out-of-range", "window extends below the spectrum bottom");

  const auto lo = std::upper_bound(spectrum.levels.begin(), spectrum.levels.end(), x0);
  const auto hi = std::upper_bound(spectrum.levels.begin(), spectrum.levels.end(), x1);

  // Exact per-segment integrals of the staircase against {1, t}, t centered
  // on epsilon so the linear basis is orthogonal to the constant one.
  double i0 = 0.0, i1 = 0.0, i2 = 0.0;
  double t_prev = -0.5 * window;
  double value = 0.0;  // staircase relative to the count at x0
  for (auto it = lo;; ++it) {
    const double t_next = (it == hi) ? 0.5 * window : (*it - epsilon);
    const double len = t_next - t_prev;
    if (len > 0.0) {
      i0 += value * len;
      i1 += value * 0.5 * (t_next * t_next - t_prev * t_prev);
      i2 += value * value * len;
    }
    if (it == hi) break;
    value += 1.0;
    t_prev = t_next;
  }
  const double a = i0 / window;
  const double b = i1 / (window * window * window / 12.0);
  const double residual = (i2 - a * i0 - b * i1) / window;
  return std::max(0.0, residual);
}

double delta3(const Ensemble& ensemble, double epsilon, double window) {
  require_samples(ensemble, 1);
  auto acc = collect(
      ensemble,
      [epsilon, window](const Spectrum& s) {
        return std::vector<double>{delta3(s, epsilon, window)};
      },
      1);
  return acc.mean(0);
}

namespace {

// Plateau rule: every successive pair over the top decade of L within 2%;
// the reported value is the median of that decade.
double extract_plateau(std::span<const double> ls, std::span<const double> curve) {
  const double l_floor = ls.back() / 10.0;
  std::size_t start = 0;
  while (start < ls.size() && ls[start] < l_floor) ++start;
  if (start == 0 || start + 1 >= ls.size())
    throw Error("no-plateau", "L grid does not span a full top decade");
  for (std::size_t k = start + 1; k < ls.size(); ++k) {
    if (std::fabs(curve[k] - curve[k - 1]) > 0.02 * std::fabs(curve[k - 1]))
      throw Error("no-plateau", "rigidity keeps drifting over the top decade of L");
  }
  std::vector<double> plateau(curve.begin() + start, curve.end());
  std::sort(plateau.begin(), plateau.end());
  const std::size_t n = plateau.size();
  return (n % 2 == 1) ? plateau[n / 2] : 0.5 * (plateau[n / 2 - 1] + plateau[n / 2]);
}

}  // namespace

SaturationResult delta3_saturation_num(const Ensemble& ensemble, double epsilon,
                                       std::span<const double> l_grid) {
  require_samples(ensemble, 1);
  std::vector<double> ls(l_grid.begin(), l_grid.end());
  if (ls.size() < 4) throw Error("invalid-argument", "L grid too short for plateau detection");
  auto acc = collect(
      ensemble,
      [&ls, epsilon](const Spectrum& s) {
        std::vector<double> row(ls.size());
        for (std::size_t k = 0; k < ls.size(); ++k) row[k] = delta3(s, epsilon, ls[k]);
        return row;
      },
      ls.size());

  SaturationResult result;
  result.l_grid = ls;
  result.curve.resize(ls.size());
  for (std::size_t k = 0; k < ls.size(); ++k) result.curve[k] = acc.mean(k);
  result.value = extract_plateau(result.l_grid, result.curve);
  return result;
}

std::vector<SaturationResult> delta3_saturation_profile(
    const Ensemble& ensemble, std::span<const double> eps_anchors,
    const std::function<std::vector<double>(double)>& l_grid_for) {
  require_samples(ensemble, 1);
  std::vector<double> anchors(eps_anchors.begin(), eps_anchors.end());
  std::vector<std::vector<double>> grids(anchors.size());
  std::size_t n_cols = 0;
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    grids[a] = l_grid_for(anchors[a]);
    if (grids[a].size() < 4)
      throw Error("invalid-argument", "L grid too short for plateau detection");
    n_cols += grids[a].size();
  }
  auto acc = collect(
      ensemble,
      [&](const Spectrum& s) {
        std::vector<double> row;
        row.reserve(n_cols);
        for (std::size_t a = 0; a < anchors.size(); ++a)
          for (double l : grids[a]) row.push_back(delta3(s, anchors[a], l));
        return row;
      },
      n_cols);

  std::vector<SaturationResult> out(anchors.size());
  std::size_t col = 0;
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    out[a].l_grid = grids[a];
    out[a].curve.resize(grids[a].size());
    for (std::size_t k = 0; k < grids[a].size(); ++k) out[a].curve[k] = acc.mean(col++);
    out[a].value = extract_plateau(out[a].l_grid, out[a].curve);
  }
  return out;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw Error("invalid-argument", "bad geometric grid spec");
  std::vector<double> g(points);
  const double ratio = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo * std::exp(ratio * static_cast<double>(i));
  g.back() = hi;
  return g;
}

}  // namespace specstat::stats
