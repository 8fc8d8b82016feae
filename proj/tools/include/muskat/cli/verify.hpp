#pragma once

// Verification suites. Each row compares a measured quantity with an
// analytic or independently computed expectation.

#include <filesystem>
#include <string>
#include <vector>

namespace muskat::cli {

struct CheckRow {
  int criterion = 0;        ///< acceptance criterion the row belongs to
  std::string check;
  double expected = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;         ///< failure detail, empty on success
};

/// dispersion, dn, gateaux, paralinearization, scaling, stability,
/// two_phase, evolution.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite. Solver failures
/// inside a check become failed rows.
std::vector<CheckRow> run_suite(const std::string& name);

/// Columns check,expected,measured,tolerance,pass.
void write_report(const std::filesystem::path& path, const std::vector<CheckRow>& rows);

}  // namespace muskat::cli
