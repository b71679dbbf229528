#include "specstat/csv.hpp"

#include <cstdio>
#include <fstream>

namespace specstat::csv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_string(const std::vector<StatSeries>& series,
                      const std::vector<std::string>& names) {
  if (series.empty() || series.size() != names.size())
    throw Error("invalid-argument", "series/name mismatch");
  const auto& grid = series.front().grid;
  for (const auto& s : series) {
    s.validate();
    if (s.grid != grid) throw Error("invalid-argument", "series grids differ");
  }
  std::string out = "# specstat-csv v1\n";
  const auto& m = series.front().meta;
  out += "# n_samples=" + std::to_string(m.n_samples) + "\n";
  out += "# seed=" + std::to_string(m.seed) + "\n";
  out += "# alpha0=" + format_double(m.alpha0) + "\n";
  out += "# sigma=" + format_double(m.sigma) + "\n";
  if (!m.config_hash.empty()) out += "# config_hash=" + m.config_hash + "\n";
  out += "abscissa";
  for (std::size_t j = 0; j < series.size(); ++j) {
    out += "," + names[j] + "," + names[j] + "_stderr," + names[j] + "_estimator," + names[j] +
           "_n";
  }
  out += "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out += format_double(grid[i]);
    for (std::size_t j = 0; j < series.size(); ++j) {
      const auto& s = series[j];
      out += "," + format_double(s.values[i]);
      out += "," + (s.stderrs.empty() ? std::string("0") : format_double(s.stderrs[i]));
      out += "," + s.meta.estimator;
      out += "," + std::to_string(s.meta.n_samples);
    }
    out += "\n";
  }
  return out;
}

std::string to_string(const StatSeries& series, const std::string& name) {
  return to_string(std::vector<StatSeries>{series}, {name});
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("io-error", "cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw Error("io-error", "write failed for " + path.string());
}

}  // namespace specstat::csv
