#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iterator>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "specstat/cache.hpp"
#include "specstat/csv.hpp"
#include "specstat/figures.hpp"
#include "specstat/run_config.hpp"
#include "specstat/svg.hpp"

using namespace specstat;
namespace fs = std::filesystem;

namespace {

StatSeries sample_series() {
  StatSeries s;
  s.grid = {1.0, 2.0, 3.0};
  s.values = {0.1, 0.25, 1.0 / 3.0};
  s.stderrs = {0.01, 0.02, 0.03};
  s.meta.estimator = "demo";
  s.meta.n_samples = 7;
  s.meta.seed = 5;
  s.meta.alpha0 = 1.0;
  s.meta.sigma = 0.05;
  s.meta.config_hash = "abc";
  return s;
}

fs::path temp_dir() {
  auto p = fs::temp_directory_path() / "specstat-test-io";
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("csv serialization is deterministic and lossless") {
  const StatSeries s = sample_series();
  const std::string a = csv::to_string(s, "value");
  const std::string b = csv::to_string(s, "value");
  CHECK(a == b);
  CHECK(a.rfind("# specstat-csv v1\n", 0) == 0);
  CHECK(a.find("abscissa,value,value_stderr,value_estimator,value_n") != std::string::npos);
  CHECK(a.find("# config_hash=abc") != std::string::npos);
  // %.17g round-trips the exact double.
  const std::string third = csv::format_double(1.0 / 3.0);
  CHECK(std::strtod(third.c_str(), nullptr) == 1.0 / 3.0);
}

TEST_CASE("csv rejects mismatched grids") {
  StatSeries a = sample_series();
  StatSeries b = sample_series();
  b.grid[2] = 4.0;
  CHECK_THROWS_AS(csv::to_string({a, b}, {"x", "y"}), Error);
  CHECK_THROWS_AS(csv::to_string(std::vector<StatSeries>{a}, {"x", "y"}), Error);
}

TEST_CASE("spectrum cache round trip and validation") {
  const fs::path dir = temp_dir();
  Spectrum s;
  s.alpha = 1.25;
  s.emax = 100.0;
  s.levels = {0.5, 1.75, 99.0};
  const cache::CacheKey key{"rectangular", 1.25, 100.0};
  const fs::path path = dir / cache::filename(key, 3);

  cache::write_spectrum(path, s, key);
  const auto back = cache::read_spectrum(path, key);
  REQUIRE(back.has_value());
  CHECK(back->alpha == s.alpha);
  CHECK(back->emax == s.emax);
  REQUIRE(back->levels.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back->levels[i] == s.levels[i]);

  // A different key must refuse the file.
  const cache::CacheKey other{"rectangular", 1.25, 200.0};
  CHECK(!cache::read_spectrum(path, other).has_value());

  // Corrupting the header invalidates the cache entry.
  std::string bytes;
  {
    std::ifstream f(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  bytes[10] ^= 0x1;
  {
    std::ofstream f(path, std::ios::binary);
    f << bytes;
  }
  CHECK(!cache::read_spectrum(path, key).has_value());
  fs::remove(path);
}

TEST_CASE("cache filenames depend on the generator inputs") {
  const cache::CacheKey a{"rectangular", 1.0, 100.0};
  const cache::CacheKey b{"rectangular", 1.0, 200.0};
  CHECK(cache::filename(a, 0) != cache::filename(b, 0));
  CHECK(cache::filename(a, 0) != cache::filename(a, 1));
  CHECK(cache::content_hash(a) != cache::content_hash(b));
}

TEST_CASE("run config round trip") {
  RunConfig cfg;
  cfg.ensemble.seed = 123;
  cfg.emax = 5000.0;
  cfg.eps_grid = {500.0, 2000.0, 10.0};
  cfg.kn_epsilon = 1500.0;
  const std::string text = cfg.to_json();
  const RunConfig back = RunConfig::from_json(text);
  CHECK(back.ensemble.seed == 123);
  CHECK(back.emax == 5000.0);
  CHECK(back.eps_grid.step == 10.0);
  CHECK(back.kn_epsilon == 1500.0);
  CHECK(back.hash() == cfg.hash());
}

TEST_CASE("run config validation errors") {
  CHECK_THROWS_WITH_AS(RunConfig::from_json("{ not json"), doctest::Contains("invalid-config"),
                       Error);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"system":"pentagon"})"), Error);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"ensemble":{"sigma":0.5}})"), Error);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"emax":100.0})"), Error);  // grids exceed emax
}

TEST_CASE("paper-scale flag rescales the experiment") {
  const RunConfig cfg = RunConfig::from_json(R"({"paper_scale":true})");
  CHECK(cfg.ensemble.count == 100000);
  CHECK(cfg.emax == 116000.0);
  CHECK(cfg.eps_grid.max == 100000.0);
}

TEST_CASE("grid spec expansion") {
  GridSpec g{0.0, 1.0, 0.25};
  const auto xs = g.linear();
  REQUIRE(xs.size() == 5);
  CHECK(xs.front() == 0.0);
  CHECK(xs.back() == 1.0);
  GridSpec bad{1.0, 0.0, 0.25};
  CHECK_THROWS_AS(bad.linear(), Error);
}

TEST_CASE("svg rendering is presentation-only and deterministic") {
  svg::LinePlot plot("t", "x", "y");
  plot.add_series("a", "#112233", {1.0, 2.0, 3.0}, {1.0, 4.0, 9.0});
  plot.add_series("b", "#445566", {1.0, 2.0, 3.0}, {2.0, 3.0, 4.0});
  const std::string a = plot.render();
  CHECK(a == plot.render());
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(std::count(a.begin(), a.end(), '\n') > 10);
  // One polyline per series.
  std::size_t polylines = 0, pos = 0;
  while ((pos = a.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    pos += 9;
  }
  CHECK(polylines == 2);
  CHECK_THROWS_AS(plot.add_series("bad", "#000", {1.0}, {1.0, 2.0}), Error);
}

TEST_CASE("log-scale plotting skips non-positive points instead of failing") {
  svg::LinePlot plot("t", "x", "y");
  plot.set_log_y(true);
  plot.add_series("a", "#112233", {1.0, 2.0, 3.0}, {0.0, 4.0, 9.0});
  CHECK(plot.render().rfind("<svg", 0) == 0);
}

TEST_CASE("make_series stamps provenance") {
  RunConfig cfg;
  const StatSeries s =
      figures::make_series({1.0, 2.0}, {0.5, 0.6}, "demo-estimator", cfg, 42);
  CHECK(s.meta.estimator == "demo-estimator");
  CHECK(s.meta.n_samples == 42);
  CHECK(s.meta.seed == cfg.ensemble.seed);
  CHECK(s.meta.config_hash == cfg.hash());
}
