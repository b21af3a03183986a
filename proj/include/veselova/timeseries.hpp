#pragma once

#include <vector>

namespace veselova {

// Upward crossings of x through level, located by cubic interpolation on uniform samples.
std::vector<double> level_crossings(const std::vector<double>& t, const std::vector<double>& x, double level);

// Mean spacing of upward crossings through the mid-range level. Needs at least two crossings.
double estimate_period(const std::vector<double>& t, const std::vector<double>& x);

}  // namespace veselova
