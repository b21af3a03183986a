#include <cmath>
#include <random>

#include "doctest.h"
#include "veselova/errors.hpp"
#include "veselova/frequency.hpp"
#include "veselova/timeseries.hpp"

using namespace veselova;

namespace {

std::vector<double> synth(const std::vector<double>& freqs, const std::vector<double>& amps, double dt, int count) {
  std::vector<double> x(count);
  for (int k = 0; k < count; ++k)
    for (std::size_t i = 0; i < freqs.size(); ++i) x[k] += amps[i] * std::cos(freqs[i] * k * dt + 0.3 * i);
  return x;
}

}  // namespace

TEST_CASE("single line") {
  const auto x = synth({2.0}, {1.0}, 0.1, 20000);
  const auto lines = extract_lines(x, 0.1);
  REQUIRE(!lines.empty());
  CHECK(lines[0].frequency == doctest::Approx(2.0).epsilon(1e-8));
  const FrequencySpectrum s = frequency_analysis(x, 0.1);
  CHECK(s.base_count == 1);
}

TEST_CASE("constant and short signals") {
  CHECK(frequency_analysis(std::vector<double>(4096, 3.0), 0.1).base_count == 0);
  CHECK_THROWS_AS(extract_lines(std::vector<double>(100, 1.0), 0.1), InsufficientData);
}

TEST_CASE("planted frequencies are recovered") {
  const std::vector<double> f{0.8944271910, 0.7559289460, 0.8280786712};
  const auto x = synth(f, {1.0, 0.6, 0.4}, 0.1, 20000);
  const FrequencySpectrum s = frequency_analysis(x, 0.1);
  CHECK(s.base_count == 3);
  for (double nu : f) {
    double best = 1e9;
    for (const auto& l : s.lines) best = std::min(best, std::abs(l.frequency - nu));
    CHECK(best < 1e-3);
  }
}

TEST_CASE("combination lines do not add to the basis") {
  const double a = 1.0, b = std::sqrt(2.0);
  const auto x = synth({a, b, a + b, 2 * a - b}, {1.0, 0.7, 0.3, 0.2}, 0.1, 30000);
  const FrequencySpectrum s = frequency_analysis(x, 0.1);
  CHECK(s.base_count == 2);
}

TEST_CASE("multi-channel merge") {
  const auto x = synth({1.3}, {1.0}, 0.1, 10000);
  const auto y = synth({1.3, 0.5}, {1.0, 0.5}, 0.1, 10000);
  const FrequencySpectrum s = frequency_analysis(std::vector<std::vector<double>>{x, y}, 0.1);
  CHECK(s.base_count == 2);
}

TEST_CASE("combination residual") {
  CHECK(combination_residual(3.0, {1.0}, 8) == doctest::Approx(0.0));
  CHECK(combination_residual(0.5, {1.0}, 8) == doctest::Approx(0.5));
  CHECK(combination_residual(1.0 + std::sqrt(2.0), {1.0, std::sqrt(2.0)}, 2) < 1e-15);
}

TEST_CASE("level crossings and period") {
  std::vector<double> t, x;
  for (int k = 0; k < 5000; ++k) {
    t.push_back(0.01 * k);
    x.push_back(std::sin(2.0 * t.back()));
  }
  const auto c = level_crossings(t, x, 0.0);
  REQUIRE(c.size() >= 2);
  CHECK(c[0] == doctest::Approx(M_PI).epsilon(1e-9));
  CHECK(estimate_period(t, x) == doctest::Approx(M_PI).epsilon(1e-9));
}
