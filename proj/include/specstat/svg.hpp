#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace specstat::svg {

/// Minimal static polyline plot; presentation layer only, never feeds back
/// into any CSV content.
class LinePlot {
public:
  LinePlot(std::string title, std::string xlabel, std::string ylabel);

  void set_log_x(bool on) { log_x_ = on; }
  void set_log_y(bool on) { log_y_ = on; }
  void add_series(const std::string& name, const std::string& color,
                  const std::vector<double>& xs, const std::vector<double>& ys);

  std::string render() const;
  void write(const std::filesystem::path& path) const;

private:
  struct Series {
    std::string name, color;
    std::vector<double> xs, ys;
  };
  std::string title_, xlabel_, ylabel_;
  bool log_x_ = false, log_y_ = false;
  std::vector<Series> series_;
};

}  // namespace specstat::svg
