#pragma once

#include <cmath>
#include <vector>

#include "doctest.h"
#include "embed/measures.hpp"

namespace testing {

// n = dx/x^2 on both sides.
inline embed::CharMeasure dx_over_x2() { return embed::charm::power_signed(1.0, 1.0); }

inline std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int k = 0; k < points; ++k) g.push_back(lo * std::pow(hi / lo, k / double(points - 1)));
  return g;
}

}  // namespace testing
