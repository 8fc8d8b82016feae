#pragma once

// Run configuration for the command-line driver: a strict nested JSON
// document where every field has a default and unknown keys are errors.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "muskat/evolution.hpp"

namespace muskat::cli {

/// amplitude * cos(k x + phase)
struct ModeSpec {
  int k = 1;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Random-phase tail amplitude * |k|^{-decay} on k_min <= |k| < n/2.
struct TailSpec {
  double amplitude = 0.0;
  double decay = 2.0;
  int k_min = 2;
};

struct InitialSpec {
  double mean = 0.0;
  std::vector<ModeSpec> modes;
  TailSpec tail;
};

struct ExperimentSpec {
  std::string name = "trajectory";  ///< trajectory | stability | scaling
  std::vector<ModeSpec> direction{{2, 1.0, 0.0}};
  std::vector<double> magnitudes{1e-6, 1e-5, 1e-4};
  int lambda = 2;
  int steps = 10;
};

struct OutputSpec {
  std::string directory = "muskat_out";
  int snapshot_stride = 1;
  std::uint64_t seed = 0;
};

struct RunConfig {
  int n = 128;
  double length = 6.283185307179586;
  PhysicalParams params;
  std::string method = "etd";  ///< etd | picard
  SolveConfig solve;
  PicardConfig picard;
  ModelConfig model;
  InitialSpec initial;
  ExperimentSpec experiment;
  OutputSpec output;

  /// Fully resolved configuration in the input schema.
  nlohmann::json to_json() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, int column, const std::string& what);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Initial interface on the configured grid.
Field initial_field(const RunConfig& cfg);
/// Sum of mode triples on `grid`.
Field modes_field(const PeriodicGrid& grid, const std::vector<ModeSpec>& modes);

}  // namespace muskat::cli
