#pragma once

#include <iosfwd>
#include <string>

#include "specstat/run_config.hpp"
#include "specstat/stats.hpp"

namespace specstat::figures {

struct GenerateStats {
  std::size_t written = 0;
  std::size_t skipped = 0;
};

/// Writes one spectrum cache file per ensemble member (or a single file for
/// the quarter circle).  Idempotent: files whose header hash matches the
/// generator inputs are left alone.
GenerateStats cmd_generate(const RunConfig& cfg, std::ostream& log);

/// Reproduces one figure as CSV (+ SVG overlay).  Names: fig1-rb, fig1-qcb,
/// fig2, fig3a, fig3b.
void cmd_figure(const std::string& name, const RunConfig& cfg, std::ostream& log);

/// Evaluates one theory sum on the configured grid.  Names: delta3inf,
/// sigma, kn, sigmag, deltan.
void cmd_theory(const std::string& sum_name, const RunConfig& cfg, std::ostream& log);

/// Rectangular-billiard ensemble backed by the cache directory when
/// use_cache is set (falling back to in-memory generation per member).
stats::Ensemble make_rb_ensemble(const RunConfig& cfg, bool use_cache);

/// Geometric L-grid for rigidity-saturation extraction at anchor eps.  The
/// plateau onset scales with the shortest-orbit period (~sqrt(eps)), so the
/// cap grows as 80*sqrt(eps), clipped to the available spectrum and to the
/// window validity range [0, 2 eps).
std::vector<double> saturation_window_grid(const RunConfig& cfg, double eps);

/// Helper shared with the acceptance suite.
StatSeries make_series(std::vector<double> grid, std::vector<double> values,
                       const std::string& estimator, const RunConfig& cfg,
                       std::size_t n_samples);

}  // namespace specstat::figures
