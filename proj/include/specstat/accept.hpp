#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "specstat/run_config.hpp"

namespace specstat::accept {

struct CriterionResult {
  std::string id;
  double measured = 0.0;
  double bound = 0.0;
  std::string cmp;  // "<=", "<", ">=", ">"
  bool pass = false;
  std::string note;

  std::string line() const;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  std::string report_text;
  bool all_pass = false;
};

/// Runs the full acceptance suite at the configured scale, computing every
/// statistic twice to certify byte-identical artifacts, and writes the report
/// plus supporting CSVs into cfg.out_dir.
AcceptanceReport run_acceptance(const RunConfig& cfg, std::ostream& log);

/// Harness self-test: a deliberately halved truncation radius must violate
/// the configured tail tolerance.
bool truncation_flags_when_halved(double alpha0, double tol);

}  // namespace specstat::accept
