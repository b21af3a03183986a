#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace veselova::cli {

enum class Mode { Full, Reduced, Axi, Cyl, Verify, EmMap, Spectrum, AxisTrace, Strata };

std::string mode_name(Mode m);

enum class InitialKind { Random, Explicit, SteadyRotation, CylReleq, AxiPoint, CylPoint };

struct InitialSpec {
  InitialKind kind = InitialKind::Random;
  double scale = 1.0;                       // random: momentum / speed scale
  std::vector<double> q, p;                 // explicit reduced state
  std::vector<std::vector<double>> g, omega;  // explicit full state
  int plane_i = 1, plane_j = 2;             // steady rotation, 1-based axes
  double speed = 1.0, phase = 0.0;
  double h = 1.0, P = 6.0;                  // cyl-releq level, also the P of axi/cyl points
  double offset_A = 0.0, offset_D = 0.0;    // cyl-releq perturbation
  double q1 = 0.0, p1 = 0.0;                // axi point
  double A = 0.0, B = 0.0, D = 0.0;         // cyl point
};

struct IntegratorSpec {
  double dt = 1e-3;
  long steps = 100000;
  double energy_guard = 1e-6;
  double orth_tol = 1e-10;
};

struct OutputSpec {
  std::string path;    // CSV; empty disables
  std::string report;  // JSON report; empty prints to stdout
  long stride = 100;
};

struct SpectrumSpec {
  std::string space = "reduced";  // reduced | full
  long sample_stride = 20;
  double tolerance = 1e-3;
  int max_coefficient = 8;
};

struct StrataSpec {
  std::string kind = "cone";  // cone | canoe
  double P = 6.0;
  int grid = 21;
};

struct ExperimentConfig {
  Mode mode = Mode::Reduced;
  std::vector<double> mass;
  std::uint64_t seed = 0;
  InitialSpec initial;
  IntegratorSpec integrator;
  OutputSpec output;
  int batch = 1;
  SpectrumSpec spectrum;
  StrataSpec strata;
  int em_samples = 0;
};

// Carries every violated field, one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::vector<std::string>& issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& c);

// VESELOVA_SEED, when set, replaces the seed.
void apply_environment(ExperimentConfig& c);

// Checks the cross-field invariants; throws ConfigError.
void validate(const ExperimentConfig& c);

}  // namespace veselova::cli
