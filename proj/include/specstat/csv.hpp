#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "specstat/core.hpp"

namespace specstat::csv {

/// Serializes one or more series sharing a grid as columns.  Deterministic
/// formatting (%.17g) so identical inputs are byte-identical.
/// Layout:
///   # specstat-csv v1
///   # key=value provenance lines
///   abscissa,<name>,<name>_stderr,...  (stderr column only when present)
///   rows
std::string to_string(const std::vector<StatSeries>& series,
                      const std::vector<std::string>& names);
std::string to_string(const StatSeries& series, const std::string& name);

void write_file(const std::filesystem::path& path, const std::string& content);

/// Formats a double exactly as the CSV writer does.
std::string format_double(double v);

}  // namespace specstat::csv
