#include "specstat/cache.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace specstat::cache {

namespace {

std::string hexfloat(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

}  // namespace

std::uint64_t content_hash(const CacheKey& key) {
  std::string material = key.system + "|" + hexfloat(key.alpha) + "|" + hexfloat(key.emax) +
                         "|v" + std::to_string(key.version);
  return fnv1a(material);
}

std::string filename(const CacheKey& key, std::size_t sample_index) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(content_hash(key)));
  return key.system + "_" + std::to_string(sample_index) + "_" + buf + ".spec";
}

void write_spectrum(const std::filesystem::path& path, const Spectrum& spectrum,
                    const CacheKey& key) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("io-error", "cannot open " + path.string() + " for writing");
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(content_hash(key)));
  f << "specstat-cache v" << key.version << "\n"
    << "system=" << key.system << "\n"
    << "alpha=" << hexfloat(spectrum.alpha) << "\n"
    << "emax=" << hexfloat(spectrum.emax) << "\n"
    << "count=" << spectrum.levels.size() << "\n"
    << "hash=" << hash << "\n"
    << "levels=float64-le\n";
  static_assert(sizeof(double) == 8);
  f.write(reinterpret_cast<const char*>(spectrum.levels.data()),
          static_cast<std::streamsize>(spectrum.levels.size() * sizeof(double)));
  if (!f) throw Error("io-error", "write failed for " + path.string());
}

std::optional<Spectrum> read_spectrum(const std::filesystem::path& path, const CacheKey& key) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  std::string line;
  auto next = [&](const char* prefix) -> std::optional<std::string> {
    if (!std::getline(f, line)) return std::nullopt;
    if (line.rfind(prefix, 0) != 0) return std::nullopt;
    return line.substr(std::strlen(prefix));
  };
  const auto magic = next("specstat-cache v");
  if (!magic || std::stoi(*magic) != key.version) return std::nullopt;
  const auto system = next("system=");
  if (!system || *system != key.system) return std::nullopt;
  const auto alpha_s = next("alpha=");
  const auto emax_s = next("emax=");
  const auto count_s = next("count=");
  const auto hash_s = next("hash=");
  const auto enc = next("levels=");
  if (!alpha_s || !emax_s || !count_s || !hash_s || !enc || *enc != "float64-le")
    return std::nullopt;
  char expected[32];
  std::snprintf(expected, sizeof(expected), "%016llx",
                static_cast<unsigned long long>(content_hash(key)));
  if (*hash_s != expected) return std::nullopt;

  Spectrum s;
  s.alpha = std::strtod(alpha_s->c_str(), nullptr);
  s.emax = std::strtod(emax_s->c_str(), nullptr);
  const std::size_t count = std::stoull(*count_s);
  s.levels.resize(count);
  f.read(reinterpret_cast<char*>(s.levels.data()),
         static_cast<std::streamsize>(count * sizeof(double)));
  if (f.gcount() != static_cast<std::streamsize>(count * sizeof(double))) return std::nullopt;
  // Header must match the key it claims to represent.
  if (s.alpha != key.alpha && key.system == "rectangular") return std::nullopt;
  if (s.emax != key.emax) return std::nullopt;
  return s;
}

}  // namespace specstat::cache
