#include "specstat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "specstat/core.hpp"

namespace specstat::svg {

namespace {
constexpr double kWidth = 860.0, kHeight = 540.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 55.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}
}  // namespace

LinePlot::LinePlot(std::string title, std::string xlabel, std::string ylabel)
    : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

void LinePlot::add_series(const std::string& name, const std::string& color,
                          const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty())
    throw Error("invalid-argument", "svg series size mismatch");
  series_.push_back({name, color, xs, ys});
}

std::string LinePlot::render() const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto tx = [this](double x) { return log_x_ ? std::log10(x) : x; };
  auto ty = [this](double y) { return log_y_ ? std::log10(y) : y; };
  for (const auto& s : series_) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      const double x = tx(s.xs[i]);
      const double y = ty(s.ys[i]);
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * (tx(x) - xmin) / (xmax - xmin); };
  auto py = [&](double y) { return kTop + ph * (1.0 - (ty(y) - ymin) / (ymax - ymin)); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">" +
         title_ + "</text>\n";
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  // Axis ticks: 5 per axis on the transformed scale.
  for (int t = 0; t <= 5; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 5.0;
    const double fy = ymin + (ymax - ymin) * t / 5.0;
    const double gx = kLeft + pw * t / 5.0;
    const double gy = kTop + ph * (1.0 - static_cast<double>(t) / 5.0);
    const double xv = log_x_ ? std::pow(10.0, fx) : fx;
    const double yv = log_y_ ? std::pow(10.0, fy) : fy;
    out += "<line x1=\"" + num(gx) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(gx) +
           "\" y2=\"" + num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(gx) + "\" y=\"" + num(kTop + ph + 20) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + num(xv) + "</text>\n";
    out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(gy) + "\" x2=\"" + num(kLeft) +
           "\" y2=\"" + num(gy) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(gy + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + num(yv) + "</text>\n";
  }
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 12) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + xlabel_ + "</text>\n";
  out += "<text x=\"16\" y=\"" + num(kTop + ph / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " +
         num(kTop + ph / 2) + ")\">" + ylabel_ + "</text>\n";

  double legend_y = kTop + 14.0;
  for (const auto& s : series_) {
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      const double x = tx(s.xs[i]);
      const double y = ty(s.ys[i]);
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      out += num(px(s.xs[i])) + "," + num(py(s.ys[i])) + " ";
    }
    out += "\"/>\n";
    out += "<line x1=\"" + num(kLeft + pw - 150) + "\" y1=\"" + num(legend_y) + "\" x2=\"" +
           num(kLeft + pw - 130) + "\" y2=\"" + num(legend_y) + "\" stroke=\"" + s.color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(kLeft + pw - 125) + "\" y=\"" + num(legend_y + 4) +
           "\" font-size=\"11\">" + s.name + "</text>\n";
    legend_y += 16.0;
  }
  out += "</svg>\n";
  return out;
}

void LinePlot::write(const std::filesystem::path& path) const {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("io-error", "cannot open " + path.string() + " for writing");
  f << render();
}

}  // namespace specstat::svg
