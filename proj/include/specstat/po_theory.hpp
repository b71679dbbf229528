#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "specstat/core.hpp"

namespace specstat::po {

/// One periodic-orbit family of the rectangular billiard at energy epsilon.
struct OrbitTerm {
  int m1 = 0, m2 = 0;  // winding numbers, non-negative, not both zero
  double delta = 1.0;  // 1/2 for bouncing-ball families (m1 = 0 or m2 = 0)
  double amplitude = 0.0;
  double period = 0.0;
  double action = 0.0;  // = 2 epsilon period
};

enum class SumMode { Diagonal, PermutedPairs, Full };

struct PoSumConfig {
  int mmax = 48;       // winding-number truncation radius
  SumMode mode = SumMode::Diagonal;
  double mu = 0.5;     // Maslov-dimension exponent, (N-1)/2 in 2D
  bool include_cos2s = false;  // keep the rapidly oscillating self terms
  double tail_tol = 0.0;       // if > 0, reject truncations whose analytic
                               // rigidity tail exceeds this fraction
  std::optional<AspectRatioDistribution> averaging;

  void validate() const;
};

std::vector<OrbitTerm> enumerate_orbits(double alpha, double epsilon, int mmax);

/// Analytic bound on the relative tail of the saturation-rigidity series
/// truncated at mmax.
double rigidity_tail_bound(double alpha, int mmax);

/// Smallest truncation radius whose analytic tail bound is below rel_tol.
int converged_mmax(double alpha, double rel_tol);

// Scalar sums at a single aspect ratio (cfg.averaging, when set, replaces
// alpha and returns the parametric mean over the configured samples).
double delta_n_po(double alpha, double epsilon, const PoSumConfig& cfg);
double sigma_interval_po(double alpha, double epsilon, double omega, const PoSumConfig& cfg);
double k_staircase_po(double alpha, double epsilon, double omega, const PoSumConfig& cfg);
double delta3_saturation_po(double alpha, double epsilon, const PoSumConfig& cfg);

/// Global variance; interference only makes sense against an ensemble, so
/// cfg.averaging must be set.
double global_variance_po(double epsilon, const PoSumConfig& cfg);

struct PairPhaseDerivatives {
  double dalpha_s_plus = 0.0;
  double dalpha_s_minus = 0.0;
};

/// Analytic alpha-derivatives of S+ = S_M + S_Mp and S- = S_M - S_Mp.
PairPhaseDerivatives stationary_phase_scan(std::pair<int, int> m, std::pair<int, int> mp,
                                           double epsilon, double alpha0);

// Curve evaluators used by the CLI and the acceptance suite.  These honor
// cfg.averaging with a deterministic per-sample parallel map reduced in
// sample order.
// `alpha` is used when cfg.averaging is not set.
std::vector<double> delta3_saturation_curve(double alpha, std::span<const double> eps_grid,
                                            const PoSumConfig& cfg);
std::vector<double> global_variance_curve(std::span<const double> eps_grid,
                                          const PoSumConfig& cfg);
std::vector<double> k_staircase_curve(double alpha, double epsilon,
                                      std::span<const double> omega_grid,
                                      const PoSumConfig& cfg);
std::vector<double> delta_n_curve(double alpha, std::span<const double> eps_grid,
                                  const PoSumConfig& cfg);

}  // namespace specstat::po
