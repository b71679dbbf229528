#include "specstat/figures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>

#include "specstat/cache.hpp"
#include "specstat/csv.hpp"
#include "specstat/po_theory.hpp"
#include "specstat/spectra.hpp"
#include "specstat/svg.hpp"

namespace specstat::figures {

namespace fs = std::filesystem;

namespace {

SeriesMeta base_meta(const RunConfig& cfg) {
  SeriesMeta m;
  m.n_samples = cfg.ensemble.count;
  m.seed = cfg.ensemble.seed;
  m.alpha0 = cfg.ensemble.alpha0;
  m.sigma = cfg.ensemble.sigma;
  m.config_hash = cfg.hash();
  return m;
}

fs::path cache_dir_of(const RunConfig& cfg) { return fs::path(cfg.out_dir) / "cache"; }

// Theory curves are smooth in alpha (the rigidity sum is even about alpha0 = 1
// to leading order), so parametric averages converge with far fewer samples
// than the numerical estimators need; kn_avg_count bounds that subsample.
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

std::vector<double> sat_anchor_grid(const RunConfig& cfg) {
  return stats::geometric_grid(cfg.sat_eps_min, cfg.sat_eps_max, cfg.sat_eps_points);
}

}  // namespace

std::vector<double> saturation_window_grid(const RunConfig& cfg, double eps) {
  // Windows must fit inside the computed spectrum and inside [0, 2 eps); the
  // 40*sqrt(eps) term keeps the top decade of the grid past the saturation
  // shoulder at every anchor.
  const double cap = std::min(
      {80.0 * std::sqrt(eps), cfg.l_max, 2.0 * (cfg.emax - eps) * 0.999, 1.9 * eps});
  return stats::geometric_grid(cfg.l_min, cap, cfg.l_points);
}

namespace {

Spectrum qcb_spectrum(const RunConfig& cfg) {
  const cache::CacheKey key{"quarter-circle", 0.0, cfg.emax};
  if (auto s = cache::read_spectrum(cache_dir_of(cfg) / cache::filename(key, 0), key)) return *s;
  return spectra::qcb_levels(spectra::QuarterCircularBilliard{}, cfg.emax);
}

stats::Ensemble single_spectrum_ensemble(Spectrum spectrum, const RunConfig& cfg) {
  stats::Ensemble e;
  e.count = 1;
  e.meta = base_meta(cfg);
  e.meta.n_samples = 1;
  e.spectrum_at = [s = std::move(spectrum)](std::size_t) { return s; };
  return e;
}

void fig1_rb(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const stats::Ensemble ens = make_rb_ensemble(cfg, true);
  const std::vector<double> eps = cfg.eps_grid.linear();

  StatSeries num = stats::global_variance_num(ens, eps, stats::Variant::VsMean);
  StatSeries theory = make_series(eps, po::delta3_saturation_curve(cfg.ensemble.alpha0, eps,
                                                                   converged_diag_cfg(cfg)),
                                  "rigidity-saturation-theory", cfg, cfg.po.kn_avg_count);

  const std::vector<double> anchors = sat_anchor_grid(cfg);
  auto profile = stats::delta3_saturation_profile(
      ens, anchors, [&cfg](double e) { return saturation_window_grid(cfg, e); });
  std::vector<double> sat(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) sat[i] = profile[i].value;
  StatSeries sat_num = make_series(anchors, sat, "rigidity-saturation-plateau", cfg, ens.count);

  csv::write_file(out / "fig1-rb.csv", csv::to_string({num, theory},
                                                      {"sigma_global_vs_mean", "delta3_sat_theory"}));
  csv::write_file(out / "fig1-rb-saturation.csv", csv::to_string(sat_num, "delta3_sat_num"));

  svg::LinePlot plot("Rectangular billiard: global variance and rigidity saturation",
                     "epsilon", "value");
  plot.add_series("sigma_global (vs mean)", "#1f77b4", num.grid, num.values);
  plot.add_series("delta3 saturation theory", "#000000", theory.grid, theory.values);
  plot.add_series("delta3 saturation (numerical)", "#d62728", sat_num.grid, sat_num.values);
  plot.write(out / "fig1-rb.svg");
  log << "fig1-rb: " << eps.size() << " grid points, " << anchors.size()
      << " saturation anchors\n";
}

void fig1_qcb(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  log << "fig1-qcb scope: single quarter-circle spectrum; no shape parameter to\n"
         "average over, so only the rigidity saturation curve is produced (no\n"
         "numerical global variance).\n";
  const stats::Ensemble ens = single_spectrum_ensemble(qcb_spectrum(cfg), cfg);
  const std::vector<double> anchors = sat_anchor_grid(cfg);

  std::vector<double> kept_eps, kept_val;
  for (double e : anchors) {
    try {
      const auto r = stats::delta3_saturation_num(ens, e, saturation_window_grid(cfg, e));
      kept_eps.push_back(e);
      kept_val.push_back(r.value);
    } catch (const Error& err) {
      if (err.code() != "no-plateau") throw;
      log << "fig1-qcb: no plateau at epsilon=" << e << ", anchor skipped\n";
    }
  }
  if (!kept_eps.empty()) {
    StatSeries sat = make_series(kept_eps, kept_val, "rigidity-saturation-plateau", cfg, 1);
    csv::write_file(out / "fig1-qcb-saturation.csv", csv::to_string(sat, "delta3_sat_num"));
  }

  // Full rigidity-vs-window curve at the middle anchor for the L dependence.
  const double mid = anchors[anchors.size() / 2];
  const std::vector<double> ls = saturation_window_grid(cfg, mid);
  std::vector<double> curve(ls.size());
  Spectrum s = ens.spectrum_at(0);
  for (std::size_t i = 0; i < ls.size(); ++i) curve[i] = stats::delta3(s, mid, ls[i]);
  StatSeries rig = make_series(ls, curve, "rigidity-vs-window", cfg, 1);
  csv::write_file(out / "fig1-qcb-rigidity.csv", csv::to_string(rig, "delta3"));

  svg::LinePlot plot("Quarter-circle billiard: spectral rigidity", "window L", "delta3");
  plot.set_log_x(true);
  plot.add_series("delta3 at mid-spectrum", "#1f77b4", ls, curve);
  plot.write(out / "fig1-qcb.svg");
  log << "fig1-qcb: " << kept_eps.size() << "/" << anchors.size() << " plateaus extracted\n";
}

void fig2(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const stats::Ensemble ens = make_rb_ensemble(cfg, true);
  const std::size_t n_show = std::min<std::size_t>(6, ens.count);

  GridSpec short_grid{0.0, 50.0, 0.25};
  GridSpec long_grid{5.0, 5000.0, 5.0};
  const std::vector<double> gs = short_grid.linear();
  const std::vector<double> gl = long_grid.linear();

  std::vector<StatSeries> stair, fluct;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n_show; ++i) {
    const Spectrum s = ens.spectrum_at(i);
    std::vector<double> ns(gs.size()), nf(gl.size());
    for (std::size_t k = 0; k < gs.size(); ++k)
      ns[k] = static_cast<double>(stats::staircase(s, gs[k]));
    for (std::size_t k = 0; k < gl.size(); ++k)
      nf[k] = static_cast<double>(stats::staircase(s, gl[k])) - gl[k];
    stair.push_back(make_series(gs, ns, "staircase", cfg, 1));
    fluct.push_back(make_series(gl, nf, "staircase-fluctuation", cfg, 1));
    names.push_back("member_" + std::to_string(i));
  }
  csv::write_file(out / "fig2-staircase.csv", csv::to_string(stair, names));
  csv::write_file(out / "fig2-fluctuation.csv", csv::to_string(fluct, names));

  // Ensemble-mean fluctuation against the averaged orbit-sum prediction, with
  // the rigid-shift variant (abscissa - 30, ordinate - 1) alongside.
  GridSpec mean_grid{40.0, 2000.0, 2.0};
  const std::vector<double> gm = mean_grid.linear();
  StatSeries mean_num = stats::mean_staircase_diagnostic(ens, gm);

  po::PoSumConfig pcfg = cfg.po_config(po::SumMode::Diagonal, false);
  pcfg.averaging = theory_subsample(cfg);
  std::vector<double> theory = po::delta_n_curve(cfg.ensemble.alpha0, gm, pcfg);
  std::vector<double> shifted_grid(gm.size());
  for (std::size_t i = 0; i < gm.size(); ++i) shifted_grid[i] = gm[i] - 30.0;
  std::vector<double> shifted = po::delta_n_curve(cfg.ensemble.alpha0, shifted_grid, pcfg);
  for (double& v : shifted) v -= 1.0;

  // Phase-tracking variant: per-member sums with actions at each member's
  // raw (pre-unfolding) energies, averaged over the same subsample.  This is
  // the form that actually overlays the data without any rigid shift.
  const AspectRatioDistribution sub = theory_subsample(cfg);
  const po::PoSumConfig plain = cfg.po_config(po::SumMode::Diagonal, false);
  std::vector<double> tracking(gm.size(), 0.0);
  for (std::size_t i = 0; i < sub.count; ++i) {
    const double a = sample_aspect_ratio(sub, i);
    const auto weyl = spectra::RectangularBilliard(a).weyl();
    std::vector<double> raw(gm.size());
    for (std::size_t k = 0; k < gm.size(); ++k) raw[k] = weyl.invert(gm[k]);
    const auto dn = po::delta_n_curve(a, raw, plain);
    for (std::size_t k = 0; k < gm.size(); ++k) tracking[k] += dn[k];
  }
  for (double& v : tracking) v /= static_cast<double>(sub.count);

  StatSeries th = make_series(gm, theory, "staircase-fluctuation-theory", cfg,
                              cfg.po.kn_avg_count);
  StatSeries th_shift = make_series(gm, shifted, "staircase-fluctuation-theory-shifted", cfg,
                                    cfg.po.kn_avg_count);
  StatSeries th_track = make_series(gm, tracking, "staircase-fluctuation-theory-tracking", cfg,
                                    sub.count);
  csv::write_file(out / "fig2-mean.csv",
                  csv::to_string({mean_num, th, th_shift, th_track},
                                 {"mean_fluctuation", "theory", "theory_shifted",
                                  "theory_tracking"}));

  svg::LinePlot plot("Mean staircase fluctuation vs orbit-sum prediction", "epsilon",
                     "<N> - epsilon");
  plot.add_series("numerical mean", "#1f77b4", mean_num.grid, mean_num.values);
  plot.add_series("theory", "#d62728", th.grid, th.values);
  plot.add_series("theory shifted", "#2ca02c", th_shift.grid, th_shift.values);
  plot.add_series("theory tracking", "#9467bd", th_track.grid, th_track.values);
  plot.write(out / "fig2.svg");
  log << "fig2: " << n_show << " members, mean grid " << gm.size() << " points\n";
}

void fig3a(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const stats::Ensemble ens = make_rb_ensemble(cfg, true);
  const std::vector<double> eps = cfg.eps_grid.linear();

  StatSeries vs_eps = stats::global_variance_num(ens, eps, stats::Variant::VsEpsilon);
  StatSeries vs_mean = stats::global_variance_num(ens, eps, stats::Variant::VsMean);

  StatSeries diag = make_series(eps, po::delta3_saturation_curve(cfg.ensemble.alpha0, eps,
                                                                 converged_diag_cfg(cfg)),
                                "global-variance-diagonal-theory", cfg, cfg.po.kn_avg_count);
  // Interference sums keep the full sample set so their parametric noise
  // matches the numerical estimator they are compared against.
  StatSeries pp = make_series(eps, po::global_variance_curve(
                                       eps, cfg.po_config(po::SumMode::PermutedPairs, true)),
                              "global-variance-permuted-pairs-theory", cfg, cfg.ensemble.count);
  StatSeries full = make_series(eps, po::global_variance_curve(
                                         eps, cfg.po_config(po::SumMode::Full, true)),
                                "global-variance-full-theory", cfg, cfg.ensemble.count);

  // Tracking variant: across-member variance of per-member orbit sums with
  // actions at each member's raw energies; this curve carries the same
  // parametric oscillation as the data, not just its envelope.
  const po::PoSumConfig plain = cfg.po_config(po::SumMode::Full, false);
  const std::size_t count = cfg.ensemble.count;
  std::vector<double> tsum(eps.size(), 0.0), tsq(eps.size(), 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = sample_aspect_ratio(cfg.ensemble, i);
    const auto weyl = spectra::RectangularBilliard(a).weyl();
    std::vector<double> raw(eps.size());
    for (std::size_t k = 0; k < eps.size(); ++k) raw[k] = weyl.invert(eps[k]);
    const auto dn = po::delta_n_curve(a, raw, plain);
    for (std::size_t k = 0; k < eps.size(); ++k) {
      tsum[k] += dn[k];
      tsq[k] += dn[k] * dn[k];
    }
  }
  std::vector<double> track(eps.size());
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double m = tsum[k] / static_cast<double>(count);
    track[k] = tsq[k] / static_cast<double>(count) - m * m;
  }
  StatSeries tracking = make_series(eps, track, "global-variance-tracking-theory", cfg, count);

  csv::write_file(out / "fig3a.csv",
                  csv::to_string({vs_eps, vs_mean, diag, pp, full, tracking},
                                 {"sigma_global_vs_eps", "sigma_global_vs_mean",
                                  "theory_diagonal", "theory_permuted_pairs", "theory_full",
                                  "theory_tracking"}));

  svg::LinePlot plot("Global level number variance", "epsilon", "sigma_global");
  plot.add_series("numerical (vs epsilon)", "#1f77b4", vs_eps.grid, vs_eps.values);
  plot.add_series("numerical (vs mean)", "#2ca02c", vs_mean.grid, vs_mean.values);
  plot.add_series("diagonal theory", "#000000", diag.grid, diag.values);
  plot.add_series("permuted-pairs theory", "#d62728", pp.grid, pp.values);
  plot.add_series("full interference theory", "#9467bd", full.grid, full.values);
  plot.add_series("tracking interference theory", "#8c564b", tracking.grid, tracking.values);
  plot.write(out / "fig3a.svg");
  log << "fig3a: " << eps.size() << " grid points\n";
}

void fig3b(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const stats::Ensemble ens = make_rb_ensemble(cfg, true);
  const std::vector<double> omega = cfg.omega_grid.linear();
  const double eps = cfg.kn_epsilon;

  StatSeries vs_eps =
      stats::staircase_correlation_num(ens, eps, omega, stats::Variant::VsEpsilon);
  StatSeries vs_mean =
      stats::staircase_correlation_num(ens, eps, omega, stats::Variant::VsMean);

  StatSeries theory = make_series(
      std::vector<double>(omega), po::k_staircase_curve(cfg.ensemble.alpha0, eps, omega, kn_cfg(cfg)),
      "staircase-correlation-theory", cfg, cfg.po.kn_avg_count);

  // Small-omega asymptote: K -> delta3 saturation minus omega/2.
  const double sat =
      po::delta3_saturation_po(cfg.ensemble.alpha0, eps, converged_diag_cfg(cfg));
  std::vector<double> line(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) line[i] = sat - 0.5 * omega[i];
  StatSeries asymptote = make_series(std::vector<double>(omega), line,
                                     "staircase-correlation-small-omega", cfg,
                                     cfg.po.kn_avg_count);

  csv::write_file(out / "fig3b.csv",
                  csv::to_string({vs_eps, vs_mean, theory, asymptote},
                                 {"kn_vs_eps", "kn_vs_mean", "theory", "small_omega_line"}));

  svg::LinePlot plot("Staircase correlation K(epsilon, omega)", "omega", "K");
  plot.add_series("numerical (vs epsilon)", "#1f77b4", vs_eps.grid, vs_eps.values);
  plot.add_series("numerical (vs mean)", "#2ca02c", vs_mean.grid, vs_mean.values);
  plot.add_series("orbit-sum theory", "#d62728", theory.grid, theory.values);
  plot.add_series("saturation - omega/2", "#000000", asymptote.grid, asymptote.values);
  plot.write(out / "fig3b.svg");
  log << "fig3b: " << omega.size() << " omega points at epsilon=" << eps << "\n";
}

}  // namespace

StatSeries make_series(std::vector<double> grid, std::vector<double> values,
                       const std::string& estimator, const RunConfig& cfg,
                       std::size_t n_samples) {
  StatSeries s;
  s.grid = std::move(grid);
  s.values = std::move(values);
  s.meta = base_meta(cfg);
  s.meta.estimator = estimator;
  s.meta.n_samples = n_samples;
  s.validate();
  return s;
}

stats::Ensemble make_rb_ensemble(const RunConfig& cfg, bool use_cache) {
  stats::Ensemble e;
  e.count = cfg.ensemble.count;
  e.meta = base_meta(cfg);
  const AspectRatioDistribution dist = cfg.ensemble;
  const double emax = cfg.emax;
  const fs::path dir = cache_dir_of(cfg);
  e.spectrum_at = [dist, emax, use_cache, dir](std::size_t i) {
    const double alpha = sample_aspect_ratio(dist, i);
    if (use_cache) {
      const cache::CacheKey key{"rectangular", alpha, emax};
      if (auto s = cache::read_spectrum(dir / cache::filename(key, i), key)) return *s;
    }
    return spectra::rb_levels(spectra::RectangularBilliard(alpha), emax);
  };
  return e;
}

GenerateStats cmd_generate(const RunConfig& cfg, std::ostream& log) {
  GenerateStats out;
  const fs::path dir = cache_dir_of(cfg);
  fs::create_directories(dir);
  if (cfg.system == "quarter-circle") {
    const cache::CacheKey key{"quarter-circle", 0.0, cfg.emax};
    const fs::path path = dir / cache::filename(key, 0);
    if (cache::read_spectrum(path, key)) {
      ++out.skipped;
    } else {
      cache::write_spectrum(path, spectra::qcb_levels(spectra::QuarterCircularBilliard{}, cfg.emax),
                            key);
      ++out.written;
    }
  } else {
    std::atomic<std::size_t> written{0};
    parallel_for(cfg.ensemble.count, [&](std::size_t i) {
      const double alpha = sample_aspect_ratio(cfg.ensemble, i);
      const cache::CacheKey key{"rectangular", alpha, cfg.emax};
      const fs::path path = dir / cache::filename(key, i);
      if (cache::read_spectrum(path, key)) return;
      cache::write_spectrum(path, spectra::rb_levels(spectra::RectangularBilliard(alpha), cfg.emax),
                            key);
      ++written;
    });
    out.written = written.load();
    out.skipped = cfg.ensemble.count - out.written;
  }
  log << "cache: " << out.written << " written, " << out.skipped << " up to date ("
      << dir.string() << ")\n";
  return out;
}

void cmd_figure(const std::string& name, const RunConfig& cfg, std::ostream& log) {
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  if (name == "fig1-rb") {
    fig1_rb(cfg, out, log);
  } else if (name == "fig1-qcb") {
    RunConfig qcfg = cfg;
    qcfg.system = "quarter-circle";
    fig1_qcb(qcfg, out, log);
  } else if (name == "fig2") {
    fig2(cfg, out, log);
  } else if (name == "fig3a") {
    fig3a(cfg, out, log);
  } else if (name == "fig3b") {
    fig3b(cfg, out, log);
  } else {
    throw Error("invalid-config",
                "unknown figure '" + name + "' (fig1-rb, fig1-qcb, fig2, fig3a, fig3b)");
  }
}

void cmd_theory(const std::string& sum_name, const RunConfig& cfg, std::ostream& log) {
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  const std::vector<double> eps = cfg.eps_grid.linear();
  const std::vector<double> omega = cfg.omega_grid.linear();

  if (sum_name == "delta3inf") {
    StatSeries s = make_series(eps, po::delta3_saturation_curve(cfg.ensemble.alpha0, eps,
                                                                converged_diag_cfg(cfg)),
                               "rigidity-saturation-theory", cfg, cfg.po.kn_avg_count);
    csv::write_file(out / "theory-delta3inf.csv", csv::to_string(s, "delta3_sat"));
  } else if (sum_name == "sigmag") {
    StatSeries diag = make_series(eps, po::global_variance_curve(
                                           eps, cfg.po_config(po::SumMode::Diagonal, true)),
                                  "global-variance-diagonal-theory", cfg, cfg.ensemble.count);
    StatSeries pp = make_series(eps, po::global_variance_curve(
                                         eps, cfg.po_config(po::SumMode::PermutedPairs, true)),
                                "global-variance-permuted-pairs-theory", cfg, cfg.ensemble.count);
    StatSeries full = make_series(eps, po::global_variance_curve(
                                           eps, cfg.po_config(po::SumMode::Full, true)),
                                  "global-variance-full-theory", cfg, cfg.ensemble.count);
    csv::write_file(out / "theory-sigmag.csv",
                    csv::to_string({diag, pp, full}, {"diagonal", "permuted_pairs", "full"}));
  } else if (sum_name == "kn") {
    StatSeries s = make_series(std::vector<double>(omega),
                               po::k_staircase_curve(cfg.ensemble.alpha0, cfg.kn_epsilon, omega,
                                                     kn_cfg(cfg)),
                               "staircase-correlation-theory", cfg, cfg.po.kn_avg_count);
    csv::write_file(out / "theory-kn.csv", csv::to_string(s, "kn"));
  } else if (sum_name == "sigma") {
    po::PoSumConfig pcfg = kn_cfg(cfg);
    std::vector<double> vals(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i)
      vals[i] = po::sigma_interval_po(cfg.ensemble.alpha0, cfg.kn_epsilon, omega[i], pcfg);
    StatSeries s = make_series(std::vector<double>(omega), vals, "interval-variance-theory", cfg,
                               cfg.po.kn_avg_count);
    csv::write_file(out / "theory-sigma.csv", csv::to_string(s, "sigma"));
  } else if (sum_name == "deltan") {
    po::PoSumConfig pcfg = cfg.po_config(po::SumMode::Diagonal, false);
    pcfg.averaging = theory_subsample(cfg);
    StatSeries s = make_series(eps, po::delta_n_curve(cfg.ensemble.alpha0, eps, pcfg),
                               "staircase-fluctuation-theory", cfg, cfg.po.kn_avg_count);
    csv::write_file(out / "theory-deltan.csv", csv::to_string(s, "deltan"));
  } else {
    throw Error("invalid-config", "unknown theory sum '" + sum_name +
                                      "' (delta3inf, sigmag, kn, sigma, deltan)");
  }
  log << "theory-" << sum_name << ".csv written to " << cfg.out_dir << "\n";
}

}  // namespace specstat::figures
