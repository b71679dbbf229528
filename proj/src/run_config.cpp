#include "specstat/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace specstat {

using nlohmann::json;

std::vector<double> GridSpec::linear() const {
  if (!(step > 0.0) || !(max >= min)) throw Error("invalid-config", "bad grid spec");
  const std::size_t n = static_cast<std::size_t>(std::floor((max - min) / step + 1.5));
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = min + step * static_cast<double>(i);
  return g;
}

void RunConfig::validate() const {
  if (system != "rectangular" && system != "quarter-circle")
    throw Error("invalid-config", "system must be rectangular or quarter-circle");
  ensemble.validate();
  if (!(emax > 0.0)) throw Error("invalid-config", "emax must be > 0");
  if (eps_grid.max > emax) throw Error("invalid-config", "eps grid exceeds emax");
  if (kn_epsilon + 0.5 * omega_grid.max > emax)
    throw Error("invalid-config", "K_N window exceeds emax");
  if (po.mmax < 1 || po.kn_mmax < 1) throw Error("invalid-config", "mmax must be >= 1");
  if (po.kn_avg_count < 1) throw Error("invalid-config", "kn_avg_count must be >= 1");
}

void RunConfig::apply_paper_scale() {
  ensemble.count = 100000;
  emax = 116000.0;
  eps_grid = {1000.0, 100000.0, 5.0};
  kn_epsilon = 100000.0;
  sat_eps_max = 100000.0;
  sat_eps_points = 13;
  l_max = 26000.0;
  paper_scale = true;
}

std::string RunConfig::to_json() const {
  json j;
  j["system"] = system;
  j["ensemble"] = {{"alpha0", ensemble.alpha0},
                   {"sigma", ensemble.sigma},
                   {"count", ensemble.count},
                   {"seed", ensemble.seed}};
  j["emax"] = emax;
  j["eps_grid"] = {{"min", eps_grid.min}, {"max", eps_grid.max}, {"step", eps_grid.step}};
  j["omega_grid"] = {{"min", omega_grid.min}, {"max", omega_grid.max}, {"step", omega_grid.step}};
  j["kn_epsilon"] = kn_epsilon;
  j["l_grid"] = {{"min", l_min}, {"max", l_max}, {"points", l_points}};
  j["sat_eps_grid"] = {{"min", sat_eps_min}, {"max", sat_eps_max}, {"points", sat_eps_points}};
  j["po"] = {{"mmax", po.mmax},
             {"kn_mmax", po.kn_mmax},
             {"kn_avg_count", po.kn_avg_count},
             {"rigidity_tail_tol", po.rigidity_tail_tol},
             {"include_cos2s", po.include_cos2s}};
  j["out"] = out_dir;
  j["paper_scale"] = paper_scale;
  return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json(const std::string& text) {
  RunConfig cfg;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error("invalid-config", std::string("config parse failure: ") + e.what());
  }
  try {
    if (j.contains("system")) cfg.system = j["system"].get<std::string>();
    if (j.contains("ensemble")) {
      const auto& e = j["ensemble"];
      if (e.contains("alpha0")) cfg.ensemble.alpha0 = e["alpha0"].get<double>();
      if (e.contains("sigma")) cfg.ensemble.sigma = e["sigma"].get<double>();
      if (e.contains("count")) cfg.ensemble.count = e["count"].get<std::size_t>();
      if (e.contains("seed")) cfg.ensemble.seed = e["seed"].get<std::uint64_t>();
    }
    if (j.contains("emax")) cfg.emax = j["emax"].get<double>();
    auto grid = [&j](const char* name, GridSpec& g) {
      if (!j.contains(name)) return;
      const auto& s = j[name];
      g.min = s.value("min", g.min);
      g.max = s.value("max", g.max);
      g.step = s.value("step", g.step);
    };
    grid("eps_grid", cfg.eps_grid);
    grid("omega_grid", cfg.omega_grid);
    if (j.contains("kn_epsilon")) cfg.kn_epsilon = j["kn_epsilon"].get<double>();
    if (j.contains("l_grid")) {
      const auto& s = j["l_grid"];
      cfg.l_min = s.value("min", cfg.l_min);
      cfg.l_max = s.value("max", cfg.l_max);
      cfg.l_points = s.value("points", cfg.l_points);
    }
    if (j.contains("sat_eps_grid")) {
      const auto& s = j["sat_eps_grid"];
      cfg.sat_eps_min = s.value("min", cfg.sat_eps_min);
      cfg.sat_eps_max = s.value("max", cfg.sat_eps_max);
      cfg.sat_eps_points = s.value("points", cfg.sat_eps_points);
    }
    if (j.contains("po")) {
      const auto& p = j["po"];
      cfg.po.mmax = p.value("mmax", cfg.po.mmax);
      cfg.po.kn_mmax = p.value("kn_mmax", cfg.po.kn_mmax);
      cfg.po.kn_avg_count = p.value("kn_avg_count", cfg.po.kn_avg_count);
      cfg.po.rigidity_tail_tol = p.value("rigidity_tail_tol", cfg.po.rigidity_tail_tol);
      cfg.po.include_cos2s = p.value("include_cos2s", cfg.po.include_cos2s);
    }
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("paper_scale") && j["paper_scale"].get<bool>()) cfg.apply_paper_scale();
  } catch (const json::exception& e) {
    throw Error("invalid-config", std::string("config field error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("io-error", "cannot read config " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return from_json(buf.str());
}

std::string RunConfig::hash() const {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(to_json())));
  return buf;
}

po::PoSumConfig RunConfig::po_config(po::SumMode mode, bool averaged) const {
  po::PoSumConfig c;
  c.mmax = po.mmax;
  c.mode = mode;
  c.include_cos2s = po.include_cos2s;
  if (averaged) c.averaging = ensemble;
  return c;
}

}  // namespace specstat
