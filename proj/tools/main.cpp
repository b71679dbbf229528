#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "specstat/accept.hpp"
#include "specstat/figures.hpp"
#include "specstat/run_config.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kAcceptanceFail = 1;
constexpr int kUsageError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order spectral statistics of integrable billiards"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  bool paper_scale = false;
  app.add_option("--config", config_path, "JSON run configuration (see README for the schema)");
  app.add_option("--out", out_override, "output directory (overrides the config)");
  app.add_option("--seed", seed_override, "ensemble seed (overrides the config)")
      ->each([&seed_set](const std::string&) { seed_set = true; });
  app.add_flag("--paper-scale", paper_scale,
               "full-scale run: 1e5 samples, energies to 1e5 (hours, not minutes)");

  auto* gen = app.add_subcommand("generate", "populate the spectrum cache");
  auto* fig = app.add_subcommand("figure", "emit one figure as CSV + SVG");
  std::string fig_name;
  fig->add_option("name", fig_name, "fig1-rb | fig1-qcb | fig2 | fig3a | fig3b")->required();
  auto* acc = app.add_subcommand("accept", "run the acceptance suite");
  auto* theory = app.add_subcommand("theory", "evaluate one orbit-sum curve as CSV");
  std::string sum_name;
  theory->add_option("sum-name", sum_name, "delta3inf | sigmag | kn | sigma | deltan")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsageError;
  }

  try {
    specstat::RunConfig cfg;
    if (!config_path.empty()) cfg = specstat::RunConfig::from_json_file(config_path);
    if (seed_set) cfg.ensemble.seed = seed_override;
    if (paper_scale) cfg.apply_paper_scale();
    if (!out_override.empty()) cfg.out_dir = out_override;
    cfg.validate();

    if (gen->parsed()) {
      specstat::figures::cmd_generate(cfg, std::cout);
      return kOk;
    }
    if (fig->parsed()) {
      specstat::figures::cmd_figure(fig_name, cfg, std::cout);
      return kOk;
    }
    if (theory->parsed()) {
      specstat::figures::cmd_theory(sum_name, cfg, std::cout);
      return kOk;
    }
    if (acc->parsed()) {
      const auto report = specstat::accept::run_acceptance(cfg, std::cerr);
      std::cout << report.report_text;
      return report.all_pass ? kOk : kAcceptanceFail;
    }
  } catch (const specstat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
