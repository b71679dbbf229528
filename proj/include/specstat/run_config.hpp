#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "specstat/core.hpp"
#include "specstat/po_theory.hpp"

namespace specstat {

struct GridSpec {
  double min = 0.0;
  double max = 1.0;
  double step = 1.0;

  std::vector<double> linear() const;
};

/// Serializable experiment description; a persisted RunConfig re-executes to
/// bit-identical outputs.
struct RunConfig {
  std::string system = "rectangular";  // or "quarter-circle"
  AspectRatioDistribution ensemble{1.0, 0.05, 2000, 20250817};
  double emax = 26000.0;

  GridSpec eps_grid{1000.0, 10000.0, 5.0};
  GridSpec omega_grid{0.0, 25.0, 0.25};
  double kn_epsilon = 10000.0;

  double l_min = 5.0, l_max = 12000.0;
  std::size_t l_points = 384;
  double sat_eps_min = 1000.0, sat_eps_max = 20000.0;
  std::size_t sat_eps_points = 9;

  struct PoSettings {
    int mmax = 24;           // oscillatory interference sums
    int kn_mmax = 192;       // DA correlation sums (small-omega regime)
    std::size_t kn_avg_count = 128;  // theory-averaging subsample for K_N
    double rigidity_tail_tol = 1e-3; // adaptive truncation for rigidity sums
    bool include_cos2s = false;
  } po;

  std::string out_dir = "out";
  bool paper_scale = false;

  void validate() const;
  void apply_paper_scale();  // full 1e5-sample / 1e5-energy run (hours)

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
  static RunConfig from_json_file(const std::filesystem::path& path);

  /// Hash of the canonical JSON form, recorded in CSV provenance.
  std::string hash() const;

  po::PoSumConfig po_config(po::SumMode mode, bool averaged) const;
};

}  // namespace specstat
