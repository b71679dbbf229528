#include "specstat/po_theory.hpp"

#include <cmath>
#include <numbers>

#include "specstat/spectra.hpp"

namespace specstat::po {

namespace {

constexpr double kPi = std::numbers::pi;

// All sums below are written with hbar = m = 1 (core unit conventions), so
// the 2/hbar^mu and 4/hbar^{2mu} prefactors reduce to plain 2 and 4.

inline double winding_delta(int m1, int m2) {
  // Bouncing-ball families lying on a boundary coincide with their
  // time-reversal.
  return (m1 == 0 || m2 == 0) ? 0.5 : 1.0;
}

// Reduced orbit coordinate: f = M1^2 sqrt(alpha) + M2^2 / sqrt(alpha).
// With a*b = 2 pi this gives
//   T      = 2 sqrt(pi f) / u,          u = sqrt(epsilon)
//   S      = 4 sqrt(pi) sqrt(f) u
//   A^2/T^2 = u / (2 pi^{5/2} f^{3/2})
struct ReducedOrbits {
  std::vector<double> w32;    // delta^2 * f^{-3/2}
  std::vector<double> w34;    // delta   * f^{-3/4}
  std::vector<double> sqrtf;  // sqrt(f)
  double sum_w32 = 0.0;

  double g() const { return sum_w32 / (kPi * kPi * std::sqrt(kPi)); }  // pi^{-5/2} sum
};

ReducedOrbits build_reduced(double alpha, int mmax) {
  ReducedOrbits r;
  const std::size_t n = static_cast<std::size_t>(mmax + 1) * (mmax + 1) - 1;
  r.w32.reserve(n);
  r.w34.reserve(n);
  r.sqrtf.reserve(n);
  const double sa = std::sqrt(alpha);
  for (int m1 = 0; m1 <= mmax; ++m1) {
    for (int m2 = 0; m2 <= mmax; ++m2) {
      if (m1 == 0 && m2 == 0) continue;
      const double f = m1 * static_cast<double>(m1) * sa + m2 * static_cast<double>(m2) / sa;
      const double d = winding_delta(m1, m2);
      const double sf = std::sqrt(f);
      const double f32 = f * sf;  // f^{3/2}
      r.w32.push_back(d * d / f32);
      r.w34.push_back(d / std::sqrt(f32));
      r.sqrtf.push_back(sf);
      r.sum_w32 += r.w32.back();
    }
  }
  return r;
}

inline double delta3_reduced(const ReducedOrbits& r, double u) { return u * r.g(); }

double sigma_reduced(const ReducedOrbits& r, double u, double omega) {
  const double tcoef = 2.0 * std::sqrt(kPi) / u;  // T = tcoef * sqrt(f)
  double s = 0.0;
  for (std::size_t i = 0; i < r.w32.size(); ++i)
    s += r.w32[i] * (1.0 - std::cos(omega * tcoef * r.sqrtf[i]));
  return 2.0 * u * s / (kPi * kPi * std::sqrt(kPi));
}

// Quadrature phase of the staircase fluctuation.  The stationary-phase
// integration over each two-parameter orbit family contributes e^{-i pi/4},
// so the fluctuation oscillates as sin(S - pi/4); without the offset the
// orbit sum is rigidly shifted against measured staircases.  Second-order
// statistics are insensitive to it (their surviving cross terms depend only
// on action differences).
constexpr double kStationaryPhase = kPi / 4.0;

double delta_n_reduced(const ReducedOrbits& r, double u) {
  const double kcoef = 4.0 * std::sqrt(kPi) * u;  // S = kcoef * sqrt(f)
  double s = 0.0;
  for (std::size_t i = 0; i < r.w34.size(); ++i)
    s += r.w34[i] * std::sin(kcoef * r.sqrtf[i] - kStationaryPhase);
  return std::numbers::sqrt2 * std::sqrt(u) * s / std::pow(kPi, 1.25);
}

double cos2s_reduced(const ReducedOrbits& r, double u) {
  const double kcoef = 8.0 * std::sqrt(kPi) * u;
  double s = 0.0;
  for (std::size_t i = 0; i < r.w32.size(); ++i) s += r.w32[i] * std::cos(kcoef * r.sqrtf[i]);
  return u * s / (kPi * kPi * std::sqrt(kPi));
}

// Cross terms between (M1,M2) and (M2,M1), M1 != M2, the pairs whose summed
// action is stationary in alpha at alpha0 = 1.
struct PermutedPairs {
  std::vector<double> coef;   // delta_M delta_Mp (f f')^{-3/4}
  std::vector<double> kdiff;  // sqrt(f) - sqrt(f')
  std::vector<double> ksum;   // sqrt(f) + sqrt(f')
};

PermutedPairs build_pairs(double alpha, int mmax) {
  PermutedPairs p;
  const double sa = std::sqrt(alpha);
  for (int m1 = 0; m1 <= mmax; ++m1) {
    for (int m2 = m1 + 1; m2 <= mmax; ++m2) {
      const double f = m1 * static_cast<double>(m1) * sa + m2 * static_cast<double>(m2) / sa;
      const double fp = m2 * static_cast<double>(m2) * sa + m1 * static_cast<double>(m1) / sa;
      const double d = winding_delta(m1, m2);  // same for the permuted partner
      const double sf = std::sqrt(f), sfp = std::sqrt(fp);
      p.coef.push_back(d * d / std::sqrt(f * sf * fp * sfp));
      p.kdiff.push_back(sf - sfp);
      p.ksum.push_back(sf + sfp);
    }
  }
  return p;
}

double pair_cross_reduced(const PermutedPairs& p, double u) {
  const double kcoef = 4.0 * std::sqrt(kPi) * u;
  double s = 0.0;
  for (std::size_t i = 0; i < p.coef.size(); ++i)
    s += p.coef[i] * (std::cos(kcoef * p.kdiff[i]) - std::cos(kcoef * p.ksum[i]));
  return 2.0 * u * s / (kPi * kPi * std::sqrt(kPi));
}

void check_truncation(double alpha, const PoSumConfig& cfg) {
  if (cfg.tail_tol > 0.0 && rigidity_tail_bound(alpha, cfg.mmax) > cfg.tail_tol)
    throw Error("truncation-warning", "rigidity tail bound exceeds configured tolerance");
}

// Averages fn(alpha_i) over cfg.averaging (or evaluates at `alpha` when no
// ensemble is configured).  Per-sample results go to fixed slots and are
// reduced pairwise, so the outcome is independent of the thread count.
template <typename Fn>
std::vector<double> averaged_curve(double alpha, std::size_t n_out, const PoSumConfig& cfg,
                                   Fn&& fn) {
  if (!cfg.averaging) {
    check_truncation(alpha, cfg);
    return fn(alpha);
  }
  const auto& dist = *cfg.averaging;
  check_truncation(dist.alpha0, cfg);
  std::vector<std::vector<double>> per_sample(dist.count);
  parallel_for(dist.count, [&](std::size_t i) {
    per_sample[i] = fn(sample_aspect_ratio(dist, i));
  });
  std::vector<double> out(n_out);
  std::vector<double> column(dist.count);
  for (std::size_t k = 0; k < n_out; ++k) {
    for (std::size_t i = 0; i < dist.count; ++i) column[i] = per_sample[i][k];
    out[k] = pairwise_sum(column) / static_cast<double>(dist.count);
  }
  return out;
}

double averaged_scalar(double alpha, const PoSumConfig& cfg,
                       const std::function<double(double)>& fn) {
  auto wrap = [&fn](double a) { return std::vector<double>{fn(a)}; };
  return averaged_curve(alpha, 1, cfg, wrap)[0];
}

}  // namespace

void PoSumConfig::validate() const {
  if (mmax < 1) throw Error("invalid-config", "mmax must be >= 1");
  if (averaging) averaging->validate();
}

std::vector<OrbitTerm> enumerate_orbits(double alpha, double epsilon, int mmax) {
  if (!(epsilon > 0.0)) throw Error("invalid-argument", "epsilon must be > 0");
  const spectra::RectangularBilliard rb(alpha);
  std::vector<OrbitTerm> orbits;
  orbits.reserve(static_cast<std::size_t>(mmax + 1) * (mmax + 1) - 1);
  for (int m1 = 0; m1 <= mmax; ++m1) {
    for (int m2 = 0; m2 <= mmax; ++m2) {
      if (m1 == 0 && m2 == 0) continue;
      OrbitTerm t;
      t.m1 = m1;
      t.m2 = m2;
      t.delta = winding_delta(m1, m2);
      const double l2 = m1 * static_cast<double>(m1) * rb.a * rb.a +
                        m2 * static_cast<double>(m2) * rb.b * rb.b;
      t.period = std::sqrt(2.0 * l2 / epsilon);
      t.action = 2.0 * epsilon * t.period;
      t.amplitude = std::sqrt(rb.a * rb.a * rb.b * rb.b / (kPi * kPi * kPi * epsilon * t.period));
      orbits.push_back(t);
    }
  }
  return orbits;
}

double rigidity_tail_bound(double alpha, int mmax) {
  // f >= s * (M1^2 + M2^2) with s = min(sqrt(alpha), 1/sqrt(alpha)); lattice
  // points outside the square live at radius > mmax, so
  //   tail <= s^{-3/2} [ (pi/2)/mmax + 1/mmax^2 ].
  const double sa = std::sqrt(alpha);
  const double s = std::min(sa, 1.0 / sa);
  const double abs_tail =
      (0.5 * kPi / mmax + 1.0 / (static_cast<double>(mmax) * mmax)) / (s * std::sqrt(s));
  const ReducedOrbits partial = build_reduced(alpha, std::min(mmax, 64));
  return abs_tail / partial.sum_w32;
}

int converged_mmax(double alpha, double rel_tol) {
  if (!(rel_tol > 0.0)) throw Error("invalid-argument", "rel_tol must be > 0");
  for (int m = 64; m <= (1 << 21); m += m / 2) {
    if (rigidity_tail_bound(alpha, m) < rel_tol) return m;
  }
  throw Error("truncation-warning", "no truncation radius satisfies the tolerance");
}

double delta_n_po(double alpha, double epsilon, const PoSumConfig& cfg) {
  cfg.validate();
  return averaged_scalar(alpha, cfg, [&](double a) {
    double s = 0.0;
    for (const auto& t : enumerate_orbits(a, epsilon, cfg.mmax))
      s += t.delta * (t.amplitude / t.period) * std::sin(t.action - kStationaryPhase);
    return 2.0 * s;
  });
}

double sigma_interval_po(double alpha, double epsilon, double omega, const PoSumConfig& cfg) {
  cfg.validate();
  if (!(omega >= 0.0) && !(omega < 0.0)) throw Error("invalid-argument", "omega must be finite");
  return averaged_scalar(alpha, cfg, [&](double a) {
    double s = 0.0;
    for (const auto& t : enumerate_orbits(a, epsilon, cfg.mmax)) {
      const double r = t.amplitude / t.period;
      s += t.delta * t.delta * r * r * (1.0 - std::cos(omega * t.period));
    }
    return 4.0 * s;
  });
}

double delta3_saturation_po(double alpha, double epsilon, const PoSumConfig& cfg) {
  cfg.validate();
  return averaged_scalar(alpha, cfg, [&](double a) {
    double s = 0.0;
    for (const auto& t : enumerate_orbits(a, epsilon, cfg.mmax)) {
      const double r = t.amplitude / t.period;
      s += t.delta * t.delta * r * r;
    }
    return 2.0 * s;
  });
}

double k_staircase_po(double alpha, double epsilon, double omega, const PoSumConfig& cfg) {
  cfg.validate();
  // Both pieces from the same truncated orbit set; the dropped cos(2S) self
  // term is behind include_cos2s for diagnostics.
  return averaged_scalar(alpha, cfg, [&](double a) {
    double sat = 0.0, sig = 0.0, c2 = 0.0;
    for (const auto& t : enumerate_orbits(a, epsilon, cfg.mmax)) {
      const double r = t.amplitude / t.period;
      const double w = t.delta * t.delta * r * r;
      sat += w;
      sig += w * (1.0 - std::cos(omega * t.period));
      if (cfg.include_cos2s) c2 += w * std::cos(2.0 * t.action);
    }
    return 2.0 * sat - 0.5 * (4.0 * sig) - 2.0 * c2;
  });
}

double global_variance_po(double epsilon, const PoSumConfig& cfg) {
  cfg.validate();
  if (!cfg.averaging)
    throw Error("invalid-config", "global_variance_po requires an averaging ensemble");
  const double u = std::sqrt(epsilon);
  return averaged_scalar(cfg.averaging->alpha0, cfg, [&](double a) {
    const ReducedOrbits r = build_reduced(a, cfg.mmax);
    switch (cfg.mode) {
      case SumMode::Full: {
        const double dn = delta_n_reduced(r, u);
        return dn * dn;
      }
      case SumMode::PermutedPairs: {
        double v = delta3_reduced(r, u) + pair_cross_reduced(build_pairs(a, cfg.mmax), u);
        if (cfg.include_cos2s) v -= cos2s_reduced(r, u);
        return v;
      }
      case SumMode::Diagonal:
      default: {
        double v = delta3_reduced(r, u);
        if (cfg.include_cos2s) v -= cos2s_reduced(r, u);
        return v;
      }
    }
  });
}

PairPhaseDerivatives stationary_phase_scan(std::pair<int, int> m, std::pair<int, int> mp,
                                           double epsilon, double alpha0) {
  if (m.first < 0 || m.second < 0 || mp.first < 0 || mp.second < 0 ||
      (m.first == 0 && m.second == 0) || (mp.first == 0 && mp.second == 0))
    throw Error("invalid-argument", "winding vectors must be non-negative and nonzero");
  if (!(alpha0 > 0.0) || !(epsilon > 0.0))
    throw Error("invalid-argument", "epsilon and alpha0 must be > 0");
  // S_M(alpha) = 4 sqrt(pi eps f),  f = M1^2 sqrt(a) + M2^2/sqrt(a)
  // dS/dalpha = 2 sqrt(pi eps) f' / sqrt(f),  f' = (M1^2 - M2^2/alpha)/(2 sqrt(alpha)).
  auto ds = [&](int m1, int m2) {
    const double sa = std::sqrt(alpha0);
    const double f = m1 * static_cast<double>(m1) * sa + m2 * static_cast<double>(m2) / sa;
    const double fprime = (m1 * static_cast<double>(m1) - m2 * static_cast<double>(m2) / alpha0) /
                          (2.0 * sa);
    return 2.0 * std::sqrt(kPi * epsilon) * fprime / std::sqrt(f);
  };
  const double d1 = ds(m.first, m.second);
  const double d2 = ds(mp.first, mp.second);
  return {d1 + d2, d1 - d2};
}

std::vector<double> delta3_saturation_curve(double alpha, std::span<const double> eps_grid,
                                            const PoSumConfig& cfg) {
  cfg.validate();
  std::vector<double> grid(eps_grid.begin(), eps_grid.end());
  return averaged_curve(alpha, grid.size(), cfg, [&](double a) {
    const double g = build_reduced(a, cfg.mmax).g();
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = std::sqrt(grid[i]) * g;
    return out;
  });
}

std::vector<double> global_variance_curve(std::span<const double> eps_grid,
                                          const PoSumConfig& cfg) {
  cfg.validate();
  if (!cfg.averaging)
    throw Error("invalid-config", "global_variance_curve requires an averaging ensemble");
  std::vector<double> grid(eps_grid.begin(), eps_grid.end());
  return averaged_curve(cfg.averaging->alpha0, grid.size(), cfg, [&](double a) {
    const ReducedOrbits r = build_reduced(a, cfg.mmax);
    std::vector<double> out(grid.size());
    if (cfg.mode == SumMode::Full) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double dn = delta_n_reduced(r, std::sqrt(grid[i]));
        out[i] = dn * dn;
      }
    } else if (cfg.mode == SumMode::PermutedPairs) {
      const PermutedPairs pairs = build_pairs(a, cfg.mmax);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = std::sqrt(grid[i]);
        out[i] = delta3_reduced(r, u) + pair_cross_reduced(pairs, u);
        if (cfg.include_cos2s) out[i] -= cos2s_reduced(r, u);
      }
    } else {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = std::sqrt(grid[i]);
        out[i] = delta3_reduced(r, u);
        if (cfg.include_cos2s) out[i] -= cos2s_reduced(r, u);
      }
    }
    return out;
  });
}

std::vector<double> k_staircase_curve(double alpha, double epsilon,
                                      std::span<const double> omega_grid,
                                      const PoSumConfig& cfg) {
  cfg.validate();
  std::vector<double> grid(omega_grid.begin(), omega_grid.end());
  const double u = std::sqrt(epsilon);
  return averaged_curve(alpha, grid.size(), cfg, [&](double a) {
    const ReducedOrbits r = build_reduced(a, cfg.mmax);
    const double sat = delta3_reduced(r, u);
    const double c2 = cfg.include_cos2s ? cos2s_reduced(r, u) : 0.0;
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      out[i] = sat - 0.5 * sigma_reduced(r, u, grid[i]) - c2;
    return out;
  });
}

std::vector<double> delta_n_curve(double alpha, std::span<const double> eps_grid,
                                  const PoSumConfig& cfg) {
  cfg.validate();
  std::vector<double> grid(eps_grid.begin(), eps_grid.end());
  return averaged_curve(alpha, grid.size(), cfg, [&](double a) {
    const ReducedOrbits r = build_reduced(a, cfg.mmax);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      out[i] = delta_n_reduced(r, std::sqrt(grid[i]));
    return out;
  });
}

}  // namespace specstat::po
