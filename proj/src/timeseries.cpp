#include "veselova/timeseries.hpp"

#include <algorithm>
#include <cmath>

#include "veselova/errors.hpp"

namespace veselova {

namespace {

// Cubic through (k-1 .. k+2) evaluated at local coordinate u in [0, 1] between k and k+1.
double cubic(const std::vector<double>& x, std::size_t k, double u) {
  const double a = x[k - 1], b = x[k], c = x[k + 1], d = x[k + 2];
  return -u * (u - 1.0) * (u - 2.0) / 6.0 * a + (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0 * b -
         (u + 1.0) * u * (u - 2.0) / 2.0 * c + (u + 1.0) * u * (u - 1.0) / 6.0 * d;
}

}  // namespace

std::vector<double> level_crossings(const std::vector<double>& t, const std::vector<double>& x, double level) {
  if (t.size() != x.size()) throw DimensionError("time and value series differ in length");
  std::vector<double> out;
  if (x.size() < 4) return out;
  for (std::size_t k = 1; k + 2 < x.size(); ++k) {
    if (!(x[k] < level && x[k + 1] >= level)) continue;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (cubic(x, k, mid) < level)
        lo = mid;
      else
        hi = mid;
    }
    const double u = 0.5 * (lo + hi);
    out.push_back(t[k] + u * (t[k + 1] - t[k]));
  }
  return out;
}

double estimate_period(const std::vector<double>& t, const std::vector<double>& x) {
  if (x.empty()) throw InsufficientData("empty series");
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const auto c = level_crossings(t, x, 0.5 * (*mn + *mx));
  if (c.size() < 2) throw InsufficientData("fewer than two level crossings");
  return (c.back() - c.front()) / static_cast<double>(c.size() - 1);
}

}  // namespace veselova
