#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "specstat/core.hpp"

namespace specstat::cache {

inline constexpr int kGeneratorVersion = 1;

/// Identity of a generated spectrum; the content hash over these fields keys
/// idempotent regeneration.
struct CacheKey {
  std::string system;  // "rectangular" | "quarter-circle"
  double alpha = 0.0;  // ignored for the quarter circle
  double emax = 0.0;
  int version = kGeneratorVersion;
};

std::uint64_t content_hash(const CacheKey& key);
std::string filename(const CacheKey& key, std::size_t sample_index);

/// Text header (system, hexfloat alpha, emax, count, hash) followed by raw
/// little-endian float64 levels.
void write_spectrum(const std::filesystem::path& path, const Spectrum& spectrum,
                    const CacheKey& key);

/// Returns the spectrum when the file exists, parses, and its recorded hash
/// matches the key; nullopt otherwise (caller regenerates).
std::optional<Spectrum> read_spectrum(const std::filesystem::path& path, const CacheKey& key);

}  // namespace specstat::cache
