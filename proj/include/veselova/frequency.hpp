#pragma once

#include <vector>

namespace veselova {

struct SpectralLine {
  double frequency = 0.0;  // rad per time unit
  double amplitude = 0.0;  // relative to the strongest line of its channel
};

struct FrequencyOptions {
  int max_lines = 16;            // per channel
  double relative_floor = 1e-3;  // stop once a line falls below this fraction of the strongest
  int max_coefficient = 8;       // bound on integer combination coefficients
  double tolerance = 1e-3;       // combination residual threshold, times omega_min
  int max_basis = 6;
  double resonance_factor = 10.0;  // near_resonance when a kept line is within this many tolerances
};

struct FrequencySpectrum {
  std::vector<SpectralLine> lines;  // merged over channels, sorted by amplitude
  std::vector<double> basis;        // greedy rationally independent subset
  int base_count = 0;
  double tolerance = 0.0;
  bool near_resonance = false;
  double resonance_margin = 0.0;  // smallest combination residual of a kept line over tol * omega_min
};

// Windowed DFT peaks refined by amplitude maximisation, subtracted one at a time.
std::vector<SpectralLine> extract_lines(const std::vector<double>& signal, double dt,
                                        const FrequencyOptions& opts = {});

FrequencySpectrum frequency_analysis(const std::vector<double>& signal, double dt, const FrequencyOptions& opts = {});
FrequencySpectrum frequency_analysis(const std::vector<std::vector<double>>& channels, double dt,
                                     const FrequencyOptions& opts = {});

// Smallest |nu - sum k_i basis_i| over integer k with |k_i| <= bound.
double combination_residual(double nu, const std::vector<double>& basis, int bound);

}  // namespace veselova
