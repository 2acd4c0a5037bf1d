#pragma once

#include <functional>

namespace embed::quad {

struct Tolerance {
  double rel = 1e-13;
  double abs = 0.0;
  int max_depth = 40;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
};

/// One 21-point Gauss-Kronrod panel on [a, b] (error = |K21 - G10|).
Result gauss_kronrod21(const std::function<double(double)>& f, double a, double b);

/// Adaptive bisection of Gauss-Kronrod panels until every panel meets
/// max(abs, rel * |panel value|), or max_depth is reached.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol = {});

}  // namespace embed::quad
