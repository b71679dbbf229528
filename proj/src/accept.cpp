#include "specstat/accept.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <utility>

#include "specstat/bessel.hpp"
#include "specstat/csv.hpp"
#include "specstat/figures.hpp"
#include "specstat/po_theory.hpp"
#include "specstat/spectra.hpp"
#include "specstat/stats.hpp"

namespace specstat::accept {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double u01(std::uint64_t& s) {
  return static_cast<double>(splitmix(s) >> 11) * 0x1.0p-53;
}

struct LineFit {
  double slope = 0.0, intercept = 0.0;
};

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

double rms(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x * x;
  return std::sqrt(s / static_cast<double>(xs.size()));
}

AspectRatioDistribution theory_subsample(const RunConfig& cfg) {
  AspectRatioDistribution d = cfg.ensemble;
  d.count = std::min(d.count, cfg.po.kn_avg_count);
  return d;
}

po::PoSumConfig converged_diag_cfg(const RunConfig& cfg) {
  po::PoSumConfig c = cfg.po_config(po::SumMode::Diagonal, false);
  c.mmax = po::converged_mmax(cfg.ensemble.alpha0, cfg.po.rigidity_tail_tol);
  c.averaging = theory_subsample(cfg);
  return c;
}

po::PoSumConfig kn_cfg(const RunConfig& cfg) {
  po::PoSumConfig c = cfg.po_config(po::SumMode::Diagonal, false);
  c.mmax = cfg.po.kn_mmax;
  c.averaging = theory_subsample(cfg);
  return c;
}

// Per-member orbit-sum staircase fluctuation with actions evaluated at the
// member's raw (pre-unfolding) energies, so the sum phase-tracks its spectrum.
std::vector<double> member_delta_n(double alpha, std::span<const double> eps_grid,
                                   const po::PoSumConfig& pc) {
  const auto weyl = spectra::RectangularBilliard(alpha).weyl();
  std::vector<double> raw(eps_grid.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = weyl.invert(eps_grid[i]);
  return po::delta_n_curve(alpha, raw, pc);
}

// Deterministic Poisson-like spectra for the estimator-identity checks; pure
// function of (seed, index) like every other ensemble here.
stats::Ensemble synthetic_poisson(std::size_t count, double emax, std::uint64_t seed,
                                  const RunConfig& cfg) {
  stats::Ensemble e;
  e.count = count;
  e.meta.estimator = "synthetic";
  e.meta.n_samples = count;
  e.meta.seed = seed;
  e.meta.config_hash = cfg.hash();
  e.spectrum_at = [seed, emax](std::size_t i) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ull * (i + 1));
    Spectrum sp;
    sp.alpha = 1.0;
    sp.emax = emax;
    double x = 0.0;
    for (;;) {
      x += -std::log(1.0 - u01(s));
      if (x > emax) break;
      sp.levels.push_back(x);
    }
    return sp;
  };
  return e;
}

// Independent long-double power-series Bessel evaluation for the zero oracle;
// fine for x <= 12 where the series is numerically benign.
long double bessel_series(unsigned n, long double x) {
  long double term = 1.0L;
  const long double half = 0.5L * x;
  for (unsigned k = 1; k <= n; ++k) term *= half / static_cast<long double>(k);
  long double sum = term;
  const long double q = half * half;
  for (unsigned k = 1; k <= 200; ++k) {
    term *= -q / (static_cast<long double>(k) * static_cast<long double>(k + n));
    sum += term;
    if (std::abs(static_cast<double>(term)) <
        1e-25 * std::abs(static_cast<double>(sum)) + 1e-30)
      break;
  }
  return sum;
}

std::vector<double> bessel_zero_oracle(unsigned order, double xmax) {
  std::vector<double> zeros;
  const double step = 0.02;
  double x = std::max(0.5, static_cast<double>(order) * 0.5);
  long double prev = bessel_series(order, x);
  for (double xn = x + step; xn <= xmax; xn += step) {
    const long double cur = bessel_series(order, xn);
    if ((prev < 0.0L) != (cur < 0.0L)) {
      long double lo = xn - step, hi = xn, flo = prev;
      for (int it = 0; it < 200; ++it) {
        const long double mid = 0.5L * (lo + hi);
        const long double fm = bessel_series(order, mid);
        if ((fm < 0.0L) == (flo < 0.0L)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
        if (hi - lo < 1e-13L) break;
      }
      zeros.push_back(static_cast<double>(0.5L * (lo + hi)));
    }
    prev = cur;
  }
  return zeros;
}

// Least-squares rigidity via per-segment Simpson quadrature; independent of
// the closed-form integrals (the x-moments and the normal equations are all
// assembled numerically).  The staircase is constant between levels, so every
// integrand is a polynomial of degree <= 2 per segment and Simpson's rule is
// exact up to rounding.
double delta3_quadrature(const Spectrum& s, double eps, double window) {
  const double x0 = eps - 0.5 * window;
  const double x1 = eps + 0.5 * window;
  std::vector<double> bounds{x0};
  for (double v : s.levels)
    if (v > x0 && v < x1) bounds.push_back(v);
  bounds.push_back(x1);

  double s1 = 0, sx = 0, sxx = 0, sn = 0, sxn = 0, snn = 0;
  for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
    const double p = bounds[b], q = bounds[b + 1];
    const double nval = static_cast<double>(
        std::upper_bound(s.levels.begin(), s.levels.end(), p) - s.levels.begin());
    const double len = q - p;
    const double xs[3] = {p, 0.5 * (p + q), q};
    const double ws[3] = {len / 6.0, 4.0 * len / 6.0, len / 6.0};
    for (int i = 0; i < 3; ++i) {
      const double x = xs[i] - eps;  // center so the moments stay well-conditioned
      s1 += ws[i];
      sx += ws[i] * x;
      sxx += ws[i] * x * x;
      sn += ws[i] * nval;
      sxn += ws[i] * x * nval;
      snn += ws[i] * nval * nval;
    }
  }
  const double det = s1 * sxx - sx * sx;
  const double a = (sn * sxx - sxn * sx) / det;
  const double b = (s1 * sxn - sx * sn) / det;
  return (snn - a * sn - b * sxn) / window;
}

struct Artifacts {
  std::vector<CriterionResult> criteria;
  std::vector<std::pair<std::string, std::string>> files;  // name -> CSV bytes

  std::string text() const {
    std::string out;
    for (const auto& c : criteria) out += c.line() + "\n";
    return out;
  }
};

void check_c1_identity(const RunConfig& cfg, Artifacts& art) {
  std::uint64_t s = cfg.ensemble.seed ^ 0xc1c1c1c1ull;
  const po::PoSumConfig pc = cfg.po_config(po::SumMode::Diagonal, false);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double eps = 100.0 + 19900.0 * u01(s);
    const double omega = 20.0 * u01(s);
    const double alpha = 0.5 + 1.5 * u01(s);
    const double k = po::k_staircase_po(alpha, eps, omega, pc);
    const double sig = po::sigma_interval_po(alpha, eps, omega, pc);
    const double sat = po::delta3_saturation_po(alpha, eps, pc);
    worst = std::max(worst, std::fabs(k + 0.5 * sig - sat));
  }
  art.criteria.push_back({"C1", worst, 1e-12, "<=", worst <= 1e-12,
                          "correlation + variance/2 - saturation over 100 random triples"});
}

void check_c2_small_omega(const RunConfig& cfg, const stats::Ensemble& ens, Artifacts& art) {
  std::vector<double> og;
  for (double w = 0.5; w <= 3.0 + 1e-9; w += 0.25) og.push_back(w);
  StatSeries num = stats::staircase_correlation_num(ens, cfg.kn_epsilon, og,
                                                    stats::Variant::VsMean);
  const std::vector<double> th =
      po::k_staircase_curve(cfg.ensemble.alpha0, cfg.kn_epsilon, og, kn_cfg(cfg));

  // Full-interference prediction carrying the same parametric fluctuations as
  // the data: covariance across ensemble members of the per-member orbit-sum
  // staircase fluctuations at eps -/+ omega/2 (population normalization, to
  // match the numerical estimator).
  const std::size_t nw = og.size();
  std::vector<double> pts(2 * nw);
  for (std::size_t j = 0; j < nw; ++j) {
    pts[j] = cfg.kn_epsilon - 0.5 * og[nw - 1 - j];
    pts[nw + j] = cfg.kn_epsilon + 0.5 * og[j];
  }
  po::PoSumConfig fc = cfg.po_config(po::SumMode::Full, false);
  fc.mmax = cfg.po.kn_mmax;
  const std::size_t count = cfg.ensemble.count;
  std::vector<double> slo(nw, 0.0), shi(nw, 0.0), sprod(nw, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const auto dn = member_delta_n(sample_aspect_ratio(cfg.ensemble, i), pts, fc);
    for (std::size_t j = 0; j < nw; ++j) {
      const double lo = dn[nw - 1 - j], hi = dn[nw + j];
      slo[j] += lo;
      shi[j] += hi;
      sprod[j] += lo * hi;
    }
  }
  std::vector<double> full(nw);
  const double dcount = static_cast<double>(count);
  for (std::size_t j = 0; j < nw; ++j)
    full[j] = (sprod[j] - slo[j] * shi[j] / dcount) / dcount;

  const double slope_num = fit_line(og, num.values).slope;
  const double slope_th = fit_line(og, th).slope;
  const double slope_full = fit_line(og, full).slope;
  // The diagonal theory carries the asymptotic -1/2 slope; the numerical
  // slope is gated against the full-interference prediction, which shares
  // the data's finite-energy interference corrections.
  const double worst =
      std::max(std::fabs(slope_th + 0.5), std::fabs(slope_num - slope_full));
  art.criteria.push_back({"C2", worst, 0.1, "<=", worst <= 0.1,
                          "small-omega correlation slopes (numerical " +
                              csv::format_double(slope_num) + ", diagonal theory " +
                              csv::format_double(slope_th) + ", full interference " +
                              csv::format_double(slope_full) + ")"});

  StatSeries th_series = figures::make_series(og, th, "staircase-correlation-theory", cfg,
                                              theory_subsample(cfg).count);
  StatSeries full_series = figures::make_series(
      og, full, "staircase-correlation-interference-theory", cfg, count);
  art.files.emplace_back(
      "accept-kn.csv",
      csv::to_string({num, th_series, full_series}, {"kn_num", "kn_theory", "kn_full"}));
}

void check_c3_saturation(const RunConfig& cfg, const stats::Ensemble& ens, Artifacts& art) {
  const std::vector<double> anchors =
      stats::geometric_grid(cfg.sat_eps_min, cfg.sat_eps_max, cfg.sat_eps_points);
  const auto profile = stats::delta3_saturation_profile(
      ens, anchors, [&cfg](double e) { return figures::saturation_window_grid(cfg, e); });
  std::vector<double> num(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) num[i] = profile[i].value;
  const std::vector<double> th =
      po::delta3_saturation_curve(cfg.ensemble.alpha0, anchors, converged_diag_cfg(cfg));

  std::vector<double> lx(anchors.size()), ln(anchors.size()), lt(anchors.size());
  double pointwise = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    lx[i] = std::log(anchors[i]);
    ln[i] = std::log(num[i]);
    lt[i] = std::log(th[i]);
    pointwise = std::max(pointwise, std::fabs(num[i] / th[i] - 1.0));
  }
  const double exp_num = fit_line(lx, ln).slope;
  const double exp_th = fit_line(lx, lt).slope;
  const double exp_dev = std::max(std::fabs(exp_num - 0.5), std::fabs(exp_th - 0.5));
  art.criteria.push_back({"C3a", exp_dev, 0.05, "<=", exp_dev <= 0.05,
                          "rigidity-saturation scaling exponents (numerical " +
                              csv::format_double(exp_num) + ", theory " +
                              csv::format_double(exp_th) + ") vs 1/2"});
  art.criteria.push_back({"C3b", pointwise, 0.10, "<=", pointwise <= 0.10,
                          "pointwise saturation agreement, numerical vs theory"});

  StatSeries sn = figures::make_series(anchors, num, "rigidity-saturation-plateau", cfg,
                                       ens.count);
  StatSeries st = figures::make_series(anchors, th, "rigidity-saturation-theory", cfg,
                                       theory_subsample(cfg).count);
  art.files.emplace_back("accept-saturation.csv",
                         csv::to_string({sn, st}, {"sat_num", "sat_theory"}));
}

void check_c4_c5_variance(const RunConfig& cfg, const stats::Ensemble& ens, Artifacts& art) {
  const std::vector<double> grid = cfg.eps_grid.linear();
  StatSeries num = stats::global_variance_num(ens, grid, stats::Variant::VsMean);
  const std::vector<double> diag =
      po::delta3_saturation_curve(cfg.ensemble.alpha0, grid, converged_diag_cfg(cfg));

  // Full-interference prediction: variance across ensemble members of the
  // per-member orbit-sum staircase fluctuation (population normalization,
  // matching the numerical vs-mean estimator), so the theory carries the same
  // parametric oscillation as the data instead of only its envelope.
  const po::PoSumConfig fc = cfg.po_config(po::SumMode::Full, false);
  const std::size_t count = cfg.ensemble.count;
  std::vector<double> tsum(grid.size(), 0.0), tsq(grid.size(), 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const auto dn = member_delta_n(sample_aspect_ratio(cfg.ensemble, i), grid, fc);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      tsum[k] += dn[k];
      tsq[k] += dn[k] * dn[k];
    }
  }
  std::vector<double> full(grid.size());
  const double dcount = static_cast<double>(count);
  for (std::size_t k = 0; k < grid.size(); ++k)
    full[k] = (tsq[k] - tsum[k] * tsum[k] / dcount) / dcount;

  std::vector<double> res_diag(grid.size()), res_full(grid.size());
  int sign_changes = 0;
  double se_sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    res_diag[i] = num.values[i] - diag[i];
    res_full[i] = num.values[i] - full[i];
    se_sum += num.stderrs[i];
    if (i > 0 && res_diag[i - 1] * res_diag[i] < 0.0) ++sign_changes;
  }
  const double mean_se = se_sum / static_cast<double>(grid.size());
  const double rms_diag = rms(res_diag);
  const double rms_full = rms(res_full);

  art.criteria.push_back({"C4a", static_cast<double>(sign_changes), 10.0, ">=",
                          sign_changes >= 10,
                          "sign changes of (numerical variance - saturation theory)"});
  const double ratio = rms_diag / mean_se;
  art.criteria.push_back({"C4b", ratio, 3.0, ">", ratio > 3.0,
                          "oscillation RMS over mean ensemble standard error"});
  const double improvement = rms_full / rms_diag;
  art.criteria.push_back({"C5", improvement, 1.0, "<", improvement < 1.0,
                          "RMS residual: full-interference theory vs diagonal theory (RMS " +
                              csv::format_double(rms_full) + " vs " +
                              csv::format_double(rms_diag) + ")"});

  StatSeries sd = figures::make_series(grid, diag, "global-variance-diagonal-theory", cfg,
                                       theory_subsample(cfg).count);
  StatSeries sf = figures::make_series(grid, full, "global-variance-full-theory", cfg,
                                       cfg.ensemble.count);
  art.files.emplace_back(
      "accept-sigmag.csv",
      csv::to_string({num, sd, sf}, {"sigma_global_num", "theory_diagonal", "theory_full"}));
}

void check_c6_stationary_phase(const RunConfig& cfg, Artifacts& art) {
  const double eps = cfg.kn_epsilon;
  const double alpha0 = 1.0;
  auto action = [eps](int m1, int m2, double al) {
    const double sa = std::sqrt(al);
    const double f = m1 * static_cast<double>(m1) * sa + m2 * static_cast<double>(m2) / sa;
    return 4.0 * std::sqrt(kPi * eps * f);
  };
  const double h = 1e-5;
  double max_plus = 0.0, min_minus = std::numeric_limits<double>::infinity(), fd_err = 0.0;
  for (int m1 = 0; m1 <= 5; ++m1) {
    for (int m2 = m1 + 1; m2 <= 5; ++m2) {
      const auto d = po::stationary_phase_scan({m1, m2}, {m2, m1}, eps, alpha0);
      max_plus = std::max(max_plus, std::fabs(d.dalpha_s_plus));
      min_minus = std::min(min_minus, std::fabs(d.dalpha_s_minus));
      auto fd = [&](double sign) {
        const double up = action(m1, m2, alpha0 + h) + sign * action(m2, m1, alpha0 + h);
        const double dn = action(m1, m2, alpha0 - h) + sign * action(m2, m1, alpha0 - h);
        return (up - dn) / (2.0 * h);
      };
      const double ep = std::fabs(fd(1.0) - d.dalpha_s_plus) /
                        std::max(1.0, std::fabs(d.dalpha_s_plus));
      const double em = std::fabs(fd(-1.0) - d.dalpha_s_minus) /
                        std::max(1.0, std::fabs(d.dalpha_s_minus));
      fd_err = std::max({fd_err, ep, em});
    }
  }
  art.criteria.push_back({"C6a", max_plus, 1e-10, "<=", max_plus <= 1e-10,
                          "summed-action derivative at alpha0=1 for permuted pairs"});
  art.criteria.push_back({"C6b", fd_err, 1e-7, "<=", fd_err <= 1e-7,
                          "analytic vs finite-difference action derivatives"});
  art.criteria.push_back({"C6c", min_minus, 1e-6, ">", min_minus > 1e-6,
                          "difference action stays non-stationary (min |dS-/dalpha|)"});
}

void check_c7_estimator_identities(const RunConfig& cfg, Artifacts& art) {
  const double eps = 250.0;
  const stats::Ensemble ens = synthetic_poisson(50, 600.0, cfg.ensemble.seed ^ 0x77ull, cfg);
  double worst = 0.0;

  const std::vector<double> w0{0.0};
  StatSeries k0 = stats::staircase_correlation_num(ens, eps, w0, stats::Variant::VsMean);
  const std::vector<double> ge{eps};
  StatSeries sg = stats::global_variance_num(ens, ge, stats::Variant::VsMean);
  worst = std::max(worst, std::fabs(k0.values[0] - sg.values[0]));

  for (double omega : {2.0, 5.0, 10.0, 20.0}) {
    const std::vector<double> wg{omega};
    StatSeries iv = stats::interval_variance_num(ens, eps, wg);
    StatSeries kn = stats::staircase_correlation_num(ens, eps, wg, stats::Variant::VsMean);
    const std::vector<double> pg{eps - 0.5 * omega, eps + 0.5 * omega};
    StatSeries gv = stats::global_variance_num(ens, pg, stats::Variant::VsMean);
    const double lhs = iv.values[0];
    const double rhs = gv.values[0] + gv.values[1] - 2.0 * kn.values[0];
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  art.criteria.push_back({"C7", worst, 1e-10, "<=", worst <= 1e-10,
                          "zero-window correlation and Var(X-Y) decomposition on shared data"});
}

void check_c8_oracles(const RunConfig& cfg, Artifacts& art) {
  // C8a: rectangle enumeration vs naive double loop, exact.
  std::uint64_t s = cfg.ensemble.seed ^ 0x8a8a8a8aull;
  double worst_a = 0.0;
  for (int c = 0; c < 20; ++c) {
    const double alpha = 0.6 + 1.2 * u01(s);
    const double raw_emax = 200.0 + 800.0 * u01(s);
    const spectra::RectangularBilliard rb(alpha);
    std::vector<double> naive;
    for (int n1 = 1; rb.raw_level(n1, 1) <= raw_emax; ++n1)
      for (int n2 = 1; rb.raw_level(n1, n2) <= raw_emax; ++n2)
        naive.push_back(rb.raw_level(n1, n2));
    std::sort(naive.begin(), naive.end());
    const std::vector<double> fast = spectra::rb_raw_levels(rb, raw_emax, 1'000'000);
    if (fast.size() != naive.size()) {
      worst_a = std::max(worst_a,
                         std::fabs(static_cast<double>(fast.size()) -
                                   static_cast<double>(naive.size())));
      continue;
    }
    for (std::size_t i = 0; i < fast.size(); ++i)
      worst_a = std::max(worst_a, std::fabs(fast[i] - naive[i]));
  }
  art.criteria.push_back({"C8a", worst_a, 0.0, "<=", worst_a <= 0.0,
                          "rectangle level enumeration vs naive double loop, 20 cases"});

  // C8b: Bessel zeros vs long-double series bisection.
  double worst_b = 0.0;
  for (unsigned order : {2u, 4u, 6u}) {
    const std::vector<double> got = bessel::zeros_below(order, 12.0);
    const std::vector<double> want = bessel_zero_oracle(order, 12.0);
    if (got.size() != want.size()) {
      worst_b = std::max(worst_b, 1.0);
      continue;
    }
    for (std::size_t i = 0; i < got.size(); ++i)
      worst_b = std::max(worst_b, std::fabs(got[i] - want[i]));
  }
  art.criteria.push_back({"C8b", worst_b, 1e-9, "<=", worst_b <= 1e-9,
                          "Bessel zeros vs series-bisection oracle below x=12"});

  // C8c: closed-form rigidity vs quadrature oracle on random small spectra.
  double worst_c = 0.0;
  std::uint64_t sc = cfg.ensemble.seed ^ 0x8c8c8c8cull;
  for (int c = 0; c < 5; ++c) {
    Spectrum sp;
    sp.emax = 100.0;
    sp.alpha = 1.0;
    double x = 0.0;
    for (;;) {
      x += -std::log(1.0 - u01(sc));
      if (x > sp.emax) break;
      sp.levels.push_back(x);
    }
    for (double window : {10.0, 30.0, 60.0}) {
      const double closed = stats::delta3(sp, 50.0, window);
      const double oracle = delta3_quadrature(sp, 50.0, window);
      worst_c = std::max(worst_c, std::fabs(closed - oracle));
    }
  }
  art.criteria.push_back({"C8c", worst_c, 1e-6, "<=", worst_c <= 1e-6,
                          "closed-form rigidity vs per-segment quadrature oracle"});

  // C8d: picket fence saturates at 1/12.
  Spectrum ruler;
  ruler.alpha = 1.0;
  ruler.emax = 12000.0;
  ruler.levels.resize(12000);
  for (std::size_t i = 0; i < ruler.levels.size(); ++i)
    ruler.levels[i] = static_cast<double>(i + 1);
  double worst_d = std::fabs(stats::delta3(ruler, 6000.0, 4000.0) - 1.0 / 12.0);
  stats::Ensemble one;
  one.count = 1;
  one.meta.n_samples = 1;
  one.meta.config_hash = cfg.hash();
  one.spectrum_at = [ruler](std::size_t) { return ruler; };
  // Integer windows keep every window commensurate with the unit spacing;
  // fractional windows carry a known O(1/L) sawtooth boundary term that is
  // not part of the 1/12 saturation statement.
  std::vector<double> lgrid = stats::geometric_grid(10, 5000, 16);
  for (double& l : lgrid) l = std::round(l);
  const auto sat = stats::delta3_saturation_num(one, 6000.0, lgrid);
  worst_d = std::max(worst_d, std::fabs(sat.value - 1.0 / 12.0));
  art.criteria.push_back({"C8d", worst_d, 1e-6, "<=", worst_d <= 1e-6,
                          "picket-fence rigidity saturation vs 1/12"});
}

void check_c9_mean_diagnostic(const RunConfig& cfg, const stats::Ensemble& ens, Artifacts& art) {
  GridSpec coarse{cfg.eps_grid.min, cfg.eps_grid.max, 50.0};
  const std::vector<double> grid = coarse.linear();
  StatSeries mean = stats::mean_staircase_diagnostic(ens, grid);
  StatSeries vse = stats::global_variance_num(ens, grid, stats::Variant::VsEpsilon);

  // The ensemble mean does not vanish: orbit families whose action is
  // stationary in the aspect ratio at alpha0 survive parametric averaging.
  // That residual is a prediction, not a defect, so the check subtracts the
  // interference-theory mean (same alpha stream, actions at raw energies)
  // plus a constant offset, and the offset is reported rather than asserted
  // to vanish.
  const po::PoSumConfig fc = cfg.po_config(po::SumMode::Full, false);
  const std::size_t count = cfg.ensemble.count;
  std::vector<double> thsum(grid.size(), 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const auto dn = member_delta_n(sample_aspect_ratio(cfg.ensemble, i), grid, fc);
    for (std::size_t k = 0; k < grid.size(); ++k) thsum[k] += dn[k];
  }
  std::vector<double> th_mean(grid.size());
  double offset = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    th_mean[i] = thsum[i] / static_cast<double>(count);
    offset += mean.values[i] - th_mean[i];
  }
  offset /= static_cast<double>(grid.size());

  std::vector<double> rms_col(grid.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rms_col[i] = std::sqrt(vse.values[i]);
    worst = std::max(worst, std::fabs(mean.values[i] - th_mean[i] - offset) / rms_col[i]);
  }
  art.criteria.push_back({"C9", worst, 0.3, "<", worst < 0.3,
                          "parametric-averaging quality |<N>-eps - theory mean| / RMS(N-eps); "
                          "residual offset " +
                              csv::format_double(offset) + " (reported, not asserted)"});

  StatSeries rms_series =
      figures::make_series(grid, rms_col, "rms-staircase-fluctuation", cfg, ens.count);
  StatSeries th_series = figures::make_series(grid, th_mean, "mean-fluctuation-theory", cfg,
                                              ens.count);
  art.files.emplace_back(
      "accept-mean.csv",
      csv::to_string({mean, th_series, rms_series},
                     {"mean_fluctuation", "mean_theory", "rms"}));
}

Artifacts compute_once(const RunConfig& cfg, std::ostream& log) {
  Artifacts art;
  const stats::Ensemble ens = figures::make_rb_ensemble(cfg, false);
  check_c1_identity(cfg, art);
  log << "C1 done\n";
  check_c2_small_omega(cfg, ens, art);
  log << "C2 done\n";
  check_c3_saturation(cfg, ens, art);
  log << "C3 done\n";
  check_c4_c5_variance(cfg, ens, art);
  log << "C4/C5 done\n";
  check_c6_stationary_phase(cfg, art);
  check_c7_estimator_identities(cfg, art);
  check_c8_oracles(cfg, art);
  log << "C6-C8 done\n";
  check_c9_mean_diagnostic(cfg, ens, art);
  log << "C9 done\n";
  return art;
}

}  // namespace

std::string CriterionResult::line() const {
  return id + " measured=" + csv::format_double(measured) + " bound=" +
         csv::format_double(bound) + " cmp=" + cmp + " verdict=" + (pass ? "PASS" : "FAIL") +
         " note=" + note;
}

bool truncation_flags_when_halved(double alpha0, double tol) {
  const int m = po::converged_mmax(alpha0, tol);
  return po::rigidity_tail_bound(alpha0, std::max(1, m / 2)) > tol;
}

AcceptanceReport run_acceptance(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  log << "acceptance: first pass\n";
  Artifacts first = compute_once(cfg, log);
  log << "acceptance: second pass (determinism check)\n";
  Artifacts second = compute_once(cfg, log);

  bool identical = first.text() == second.text() && first.files.size() == second.files.size();
  if (identical) {
    for (std::size_t i = 0; i < first.files.size(); ++i)
      identical = identical && first.files[i] == second.files[i];
  }
  AcceptanceReport report;
  report.criteria = first.criteria;
  report.criteria.push_back({"C10", identical ? 0.0 : 1.0, 0.0, "<=", identical,
                             "byte mismatches between two full runs with the same seed"});
  const bool harness_ok =
      truncation_flags_when_halved(cfg.ensemble.alpha0, cfg.po.rigidity_tail_tol);
  report.criteria.push_back({"H1", harness_ok ? 1.0 : 0.0, 1.0, ">=", harness_ok,
                             "harness self-test: halved truncation radius trips the tail bound"});

  report.all_pass = true;
  for (const auto& c : report.criteria) report.all_pass = report.all_pass && c.pass;

  std::string text = "# specstat acceptance report v1\n# config_hash=" + cfg.hash() + "\n";
  for (const auto& c : report.criteria) text += c.line() + "\n";
  text += std::string("# overall=") + (report.all_pass ? "PASS" : "FAIL") + "\n";
  report.report_text = text;

  const std::filesystem::path out(cfg.out_dir);
  csv::write_file(out / "accept-report.txt", text);
  for (const auto& [name, bytes] : first.files) csv::write_file(out / name, bytes);
  return report;
}

}  // namespace specstat::accept
