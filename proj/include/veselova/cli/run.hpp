#pragma once

#include <string>
#include <vector>

#include "veselova/cli/config.hpp"
#include "veselova/frequency.hpp"

namespace veselova::cli {

constexpr int report_schema_version = 1;

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct RunReport {
  std::string mode;
  int n = 0;
  std::uint64_t seed = 0;
  double drift_H = 0.0;
  double drift_P = 0.0;
  double drift_F = 0.0;
  bool has_F = false;
  double max_constraint_residual = 0.0;
  std::vector<std::string> strata;
  bool has_spectrum = false;
  FrequencySpectrum spectrum;
  std::vector<Check> checks;
  std::vector<std::string> files;
  double wall_time = 0.0;

  bool all_checks_passed() const;
};

RunReport run(const ExperimentConfig& config);
std::string report_to_json(const RunReport& r);

// Invariant suite for one mass tensor; used by the verify mode.
std::vector<Check> verify_suite(const std::vector<double>& mass, std::uint64_t seed);

// Named example configurations.
std::vector<std::pair<std::string, ExperimentConfig>> presets();

}  // namespace veselova::cli
